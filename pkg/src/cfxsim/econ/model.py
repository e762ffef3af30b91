"""Calibrated miner-revenue model: rewards, uptake, fees, storage interest, price."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Optional

from ..units import BLOCKS_PER_YEAR, DRIP_PER_CFX, SECONDS_PER_DAY, exact, to_drip


@dataclass(frozen=True)
class AdoptionCurve:
    """Logistic uptake ``max / (1 + exp(-growth * (d - midpoint)))``."""

    max: float = 0.83
    growth: float = 0.017
    midpoint: float = 690.0

    def __call__(self, d: float) -> float:
        return uptake(self, d)

    def shifted(self, days: float) -> "AdoptionCurve":
        """Curve reaching every level ``days`` later (negative = earlier)."""
        return replace(self, midpoint=self.midpoint + days)


ETH_UPTAKE = AdoptionCurve(0.83, 0.017, 690.0)
FAST_UPTAKE = AdoptionCurve(0.83, 0.017, 510.0)
SLOW_UPTAKE = AdoptionCurve(0.83, 0.017, 870.0)
UPTAKE_PRESETS = {"eth": ETH_UPTAKE, "fast": FAST_UPTAKE, "slow": SLOW_UPTAKE}


@dataclass(frozen=True)
class EconParams:
    genesis_tokens: float = 5_000_000_000
    initial_price: float = 0.088
    block_inflation: float = 0.05
    interest_rate: float = 0.02
    avg_fee: float = 0.01
    bond_per_tx: float = 0.01
    daily_bond_rate: Optional[float] = None  # None -> interest_rate / 365
    locked_fraction: float = 0.0
    capacity_tps: float = 3200
    seconds_per_day: int = SECONDS_PER_DAY
    blocks_per_second: int = 2
    price_growth: float = 0.0031
    adoption: AdoptionCurve = field(default_factory=lambda: ETH_UPTAKE)

    @property
    def bond_rate(self) -> float:
        if self.daily_bond_rate is None:
            return self.interest_rate / 365
        return self.daily_bond_rate

    @property
    def blocks_per_day(self) -> int:
        return self.blocks_per_second * self.seconds_per_day

    def validate(self) -> list[str]:
        problems = []
        for name in ("block_inflation", "interest_rate", "locked_fraction"):
            v = getattr(self, name)
            if not 0 <= v < 1:
                problems.append(f"{name} out of [0,1)")
        if not self.genesis_tokens > 0:
            problems.append("genesis_tokens must be > 0")
        if not self.capacity_tps > 0:
            problems.append("capacity_tps must be > 0")
        if self.bond_per_tx < 0:
            problems.append("bond_per_tx must be >= 0")
        if self.avg_fee < 0:
            problems.append("avg_fee must be >= 0")
        if self.initial_price < 0:
            problems.append("initial_price must be >= 0")
        if self.daily_bond_rate is not None and self.daily_bond_rate < 0:
            problems.append("daily_bond_rate must be >= 0")
        if self.seconds_per_day <= 0 or self.blocks_per_second <= 0:
            problems.append("seconds_per_day and blocks_per_second must be > 0")
        if not 0 < self.adoption.max <= 1:
            problems.append("adoption.max out of (0,1]")
        if not self.adoption.growth > 0:
            problems.append("adoption.growth must be > 0")
        return problems


# -- interest ---------------------------------------------------------------


def interest_factor(rate: float, blocks: int, blocks_per_year: int = BLOCKS_PER_YEAR) -> float:
    """Per-token interest after compounding every block for ``blocks`` blocks."""
    if blocks < 0:
        raise ValueError("blocks must be non-negative")
    return math.expm1(blocks * math.log1p(rate / blocks_per_year))


def interest_payout_drip(
    balance_drip: int, rate, blocks: int, blocks_per_year: int = BLOCKS_PER_YEAR
) -> int:
    """Interest on a Drip balance, rounded down to whole Drip."""
    if blocks < 0 or balance_drip < 0:
        raise ValueError("balance and blocks must be non-negative")
    if blocks == 0 or balance_drip == 0:
        return 0
    r = exact(rate)
    digits = len(str(balance_drip)) + len(str(blocks)) + 40
    with localcontext() as ctx:
        ctx.prec = digits
        per_block = Decimal(r.numerator) / Decimal(r.denominator * blocks_per_year)
        growth = (Decimal(1) + per_block) ** blocks - 1
        return int((Decimal(balance_drip) * growth).to_integral_value(rounding="ROUND_FLOOR"))


# -- block rewards ------------------------------------------------------------


def per_block_reward_exact(p: EconParams) -> Fraction:
    """B = G r_b / (blocks per year), in tokens."""
    return exact(p.genesis_tokens) * exact(p.block_inflation) / (p.blocks_per_day * 365)


def per_block_reward(p: EconParams) -> int:
    """Per-block reward in Drip, floored."""
    return to_drip(per_block_reward_exact(p))


def daily_block_rewards(p: EconParams) -> Fraction:
    """b(d) = G r_b / 365 tokens."""
    return exact(p.genesis_tokens) * exact(p.block_inflation) / 365


# -- usage ------------------------------------------------------------------


def uptake(curve: AdoptionCurve, d: float) -> float:
    z = -curve.growth * (d - curve.midpoint)
    if z > 700:
        return 0.0
    return curve.max / (1.0 + math.exp(z))


def day_reaching(curve: AdoptionCurve, level: float) -> float:
    """Inverse of ``uptake``: the day on which the curve equals ``level``."""
    if not 0 < level < curve.max:
        raise ValueError("level must lie strictly between 0 and the curve maximum")
    return curve.midpoint - math.log(curve.max / level - 1.0) / curve.growth


def daily_transactions(p: EconParams, d: float) -> float:
    return uptake(p.adoption, d) * p.capacity_tps * p.seconds_per_day


def daily_fees(p: EconParams, d: float) -> float:
    return p.avg_fee * daily_transactions(p, d)


def computation_fraction(d: float) -> float:
    """Share of gas used by computation, clamped to [0, 1]."""
    g = 1.0 - (72.0 - 0.04 * d + 7.05e-6 * d * d) / 100.0
    return min(1.0, max(0.0, g))


def bond_interest(bond_per_tx: float, computation: float, transactions: float, daily_rate: float) -> float:
    return bond_per_tx * computation * transactions * daily_rate


def storage_interest(p: EconParams, d: float) -> float:
    """Tokens paid to miners on day ``d`` as interest on new storage bonds."""
    return bond_interest(p.bond_per_tx, computation_fraction(d), daily_transactions(p, d), p.bond_rate)


# -- supply and price -------------------------------------------------------


@dataclass(frozen=True)
class SupplyDay:
    day: int
    block_reward_drip: int
    storage_interest_drip: int
    locked_interest_drip: int
    supply_drip: int


def supply_path(p: EconParams, horizon_days: int) -> list[SupplyDay]:
    """Exact Drip supply for days 0..horizon_days (day 0 is genesis)."""
    return _supply_path(p, horizon_days)[: horizon_days + 1]


_SUPPLY_CACHE: dict = {}


def _supply_path(p: EconParams, horizon_days: int) -> list[SupplyDay]:
    path = _SUPPLY_CACHE.get(p)
    if path is None:
        if len(_SUPPLY_CACHE) >= 64:
            _SUPPLY_CACHE.clear()
        path = _SUPPLY_CACHE[p] = [SupplyDay(0, 0, 0, 0, to_drip(p.genesis_tokens))]
    if len(path) > horizon_days:
        return path
    block_daily = per_block_reward(p) * p.blocks_per_day
    locked = exact(p.locked_fraction)
    supply = path[-1].supply_drip
    for d in range(len(path), horizon_days + 1):
        bond = to_drip(storage_interest(p, d))
        lock = 0
        if locked:
            lock = interest_payout_drip(int(supply * locked), p.interest_rate, p.blocks_per_day)
        supply += block_daily + bond + lock
        path.append(SupplyDay(d, block_daily, bond, lock, supply))
    return path


def supply_tokens(p: EconParams, d: int) -> Fraction:
    return Fraction(_supply_path(p, d)[d].supply_drip, DRIP_PER_CFX)


def price_exact(p: EconParams, d: int) -> Fraction:
    """p(0) G / (G + cumulative rewards + cumulative interest) as a fraction."""
    if d < 0:
        raise ValueError("day must be non-negative")
    return exact(p.initial_price) * exact(p.genesis_tokens) / supply_tokens(p, d)


def price(p: EconParams, d: int) -> float:
    return float(price_exact(p, d))


def speculative_price(p: EconParams, d: float) -> float:
    return p.initial_price * (1.0 + p.price_growth) ** d


def market_cap(p: EconParams, d: int, speculative: bool = False) -> float:
    px = speculative_price(p, d) if speculative else price(p, d)
    return px * float(supply_tokens(p, d))


def growth_for_market_cap(p: EconParams, target_cap: float, day: int) -> float:
    """Daily growth g such that the speculative market cap hits ``target_cap`` on ``day``."""
    ratio = target_cap / (p.initial_price * float(supply_tokens(p, day)))
    return ratio ** (1.0 / day) - 1.0


# -- revenue ----------------------------------------------------------------


@dataclass(frozen=True)
class RevenueRow:
    day: int
    block_reward_tokens: float
    fees: float
    interest_tokens: float
    price: float
    total: float

    @property
    def reward_value(self) -> float:
        return self.price * self.block_reward_tokens

    @property
    def interest_value(self) -> float:
        return self.price * self.interest_tokens


PRICE_MODES = ("inflation", "speculative")


def revenue_series(p: EconParams, horizon_days: int, price_mode: str = "inflation") -> list[RevenueRow]:
    """Daily miner revenue m(d) = p(d) b(d) + F(d) + p(d) I(d) for d = 1..horizon."""
    if horizon_days < 1:
        raise ValueError("horizon_days must be >= 1")
    if price_mode not in PRICE_MODES:
        raise ValueError(f"price_mode must be one of {PRICE_MODES}")
    problems = p.validate()
    if problems:
        raise ValueError("; ".join(problems))
    b = float(daily_block_rewards(p))
    rows = []
    for d in range(1, horizon_days + 1):
        px = speculative_price(p, d) if price_mode == "speculative" else price(p, d)
        fees = daily_fees(p, d)
        interest = storage_interest(p, d)
        rows.append(RevenueRow(d, b, fees, interest, px, px * b + fees + px * interest))
    return rows


def windowed_mean(values, window: int) -> list[float]:
    """Trailing mean over up to ``window`` points (shorter at the start)."""
    if window < 1:
        raise ValueError("window must be >= 1")
    out, acc = [], 0.0
    vals = list(values)
    for i, v in enumerate(vals):
        acc += v
        if i >= window:
            acc -= vals[i - window]
        out.append(acc / min(i + 1, window))
    return out
