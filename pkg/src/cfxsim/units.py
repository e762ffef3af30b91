"""Token units and exact-number helpers shared across modules."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

DRIP_PER_CFX = 10**18
SECONDS_PER_DAY = 86_400
BLOCKS_PER_SECOND = 2
BLOCKS_PER_DAY = BLOCKS_PER_SECOND * SECONDS_PER_DAY
BLOCKS_PER_YEAR = BLOCKS_PER_DAY * 365


def exact(value) -> Fraction:
    """Convert a number to a Fraction, reading floats by their decimal repr.

    ``exact(0.05) == Fraction(1, 20)``, unlike ``Fraction(0.05)``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(str(value))


def to_drip(tokens) -> int:
    """Floor a token amount to whole Drip."""
    return int(exact(tokens) * DRIP_PER_CFX // 1)


def from_drip(drip: int) -> Fraction:
    return Fraction(drip, DRIP_PER_CFX)
