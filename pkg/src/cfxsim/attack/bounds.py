"""Double-spend security thresholds for serial chains and anticone-penalised DAGs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..units import exact

PENALTY_CAP = 10
PENALTY_DIVISOR = 100


@dataclass(frozen=True)
class AttackParams:
    block_reward: object  # B, tokens
    advantage: object  # A > 1
    length: int  # t >= 1 blocks
    horizon: int = PENALTY_CAP

    def __post_init__(self):
        if not exact(self.advantage) > 1:
            raise ValueError("advantage multiple A must exceed 1")
        if self.length < 1:
            raise ValueError("attack length t must be >= 1")
        if exact(self.block_reward) < 0:
            raise ValueError("block reward must be non-negative")


@dataclass(frozen=True)
class BoundResult:
    serial_bound: Fraction
    pi_t: Fraction
    conflux_bound: Fraction

    @property
    def gap(self) -> Fraction:
        return self.conflux_bound - self.serial_bound


def pi_t(t: int, horizon: int = PENALTY_CAP, divisor: int = PENALTY_DIVISOR) -> Fraction:
    """Penalty-discounted block count of a t-block attack chain.

    Closed form of sum_{i=1..t} (1 - (min(t-i, horizon)/divisor)^2).
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    k = min(t - 1, horizon)
    squares = k * (k + 1) * (2 * k + 1) // 6 + max(0, t - 1 - horizon) * horizon * horizon
    return t - Fraction(squares, divisor * divisor)


def serial_bound(p: AttackParams) -> Fraction:
    """t B (A - 1): largest value a serial chain can secure."""
    return p.length * exact(p.block_reward) * (exact(p.advantage) - 1)


def conflux_bound(p: AttackParams) -> Fraction:
    """B (t A - Pi_t)."""
    return exact(p.block_reward) * (p.length * exact(p.advantage) - pi_t(p.length, p.horizon))


def bounds(p: AttackParams) -> BoundResult:
    return BoundResult(serial_bound(p), pi_t(p.length, p.horizon), conflux_bound(p))


def miner_equilibrium(block_reward, miners: int) -> Fraction:
    """Per-miner cost c with c N = B."""
    if miners < 1:
        raise ValueError("need at least one miner")
    return exact(block_reward) / miners


def expected_attack_length(confirmations: int, advantage: float) -> int:
    """Rough t for catching up ``confirmations`` blocks with advantage multiple A.

    Heuristic ceil(k (A+1)/(A-1)): the attacker out-mines honest miners at
    net rate (A-1)/(A+1) blocks per block. Not a closed-form race result.
    """
    if advantage <= 1:
        raise ValueError("advantage must exceed 1")
    return max(1, math.ceil(confirmations * (advantage + 1) / (advantage - 1)))


def bound_table(lengths, advantages, rewards) -> list[dict]:
    rows = []
    for B in rewards:
        for A in advantages:
            for t in lengths:
                r = bounds(AttackParams(B, A, t))
                rows.append(
                    {
                        "t": t,
                        "A": A,
                        "B": B,
                        "serial_bound": r.serial_bound,
                        "pi_t": r.pi_t,
                        "conflux_bound": r.conflux_bound,
                        "gap": r.gap,
                    }
                )
    return rows
