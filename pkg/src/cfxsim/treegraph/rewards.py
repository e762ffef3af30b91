"""Anticone reward penalty and first-occurrence transaction execution."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from ..units import DRIP_PER_CFX, exact
from .graph import DEFAULT_HORIZON, TreeGraph


@dataclass(frozen=True)
class RewardParams:
    base_reward: object = DRIP_PER_CFX  # B0; an int means Drip
    penalty_divisor: int = 100
    horizon_epochs: int = DEFAULT_HORIZON

    def __post_init__(self):
        if self.penalty_divisor <= 0:
            raise ValueError("penalty_divisor must be positive")
        if self.horizon_epochs < 0:
            raise ValueError("horizon_epochs must be non-negative")


def penalty_ratio(anticone_size: int, divisor: int = 100) -> Fraction:
    """max{0, 1 - (a/divisor)^2} as an exact fraction."""
    if anticone_size >= divisor:
        return Fraction(0)
    return 1 - Fraction(anticone_size, divisor) ** 2


def block_reward(params: RewardParams, anticone_size: int) -> Fraction:
    return exact(params.base_reward) * penalty_ratio(anticone_size, params.penalty_divisor)


def block_reward_drip(params: RewardParams, anticone_size: int) -> int:
    """Reward floored to whole Drip; ``params.base_reward`` is read as Drip."""
    return int(block_reward(params, anticone_size) // 1)


def graph_rewards(
    g: TreeGraph, params: RewardParams = RewardParams(), blocks: Optional[Iterable[int]] = None
) -> dict[int, int]:
    """Drip reward for every mature block (or the mature subset of ``blocks``).

    Immature or unepoched blocks are left out: their anticone can still grow.
    """
    if g.anticone_horizon != params.horizon_epochs:
        g = g.subgraph(lambda b: True)
        g.anticone_horizon = params.horizon_epochs
    candidates = g.ids() if blocks is None else blocks
    return {
        b: block_reward_drip(params, g.anticone_size(b)) for b in candidates if g.is_mature(b)
    }


def apply_transactions(g: TreeGraph, order: Optional[list[int]] = None) -> list[tuple[int, int]]:
    """Execute transactions along the total order, first occurrence wins.

    Returns ``(tx_id, block_id)`` pairs in execution order; duplicates later in
    the order (or later in the same block) are skipped as no-ops.
    """
    if order is None:
        order = g.total_order()
    seen: set[int] = set()
    executed = []
    for block_id in order:
        for tx in g.block(block_id).tx_ids:
            if tx not in seen:
                seen.add(tx)
                executed.append((tx, block_id))
    return executed
