"""Exact raw moments of the load of one bin under q-wise independent hashing.

For M balls thrown q-wise independently into N bins, the load S of a fixed
bin satisfies E S^r = sum_j S(r, j) * M_(j) / N^j (falling factorial M_(j)),
exactly, for every order r up to the independence level q.  Moments are
kept as exact rationals; enclosures appear only at reporting boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .combinat import StirlingTable, falling_factorial
from .errors import PreconditionError
from .intervals import (DEFAULT_FRAC_BITS, FloatInterval, log2_fraction,
                        nth_root)


@dataclass(frozen=True)
class BallsBinsInstance:
    """M balls into N bins with a q-wise independent assignment."""

    balls: int
    bins: int
    independence: int

    def __post_init__(self):
        if self.balls < 1:
            raise PreconditionError("instance requires balls >= 1")
        if self.bins < 1:
            raise PreconditionError("instance requires bins >= 1")
        if self.independence < 1:
            raise PreconditionError("instance requires independence >= 1")


@dataclass(frozen=True)
class MomentResult:
    instance: BallsBinsInstance
    order: int
    value: Fraction
    log2_value: FloatInterval


def _check_order(inst: BallsBinsInstance, order: int, table: StirlingTable):
    if order < 1:
        raise PreconditionError("moment order must be >= 1")
    if order > inst.independence:
        raise PreconditionError(
            f"order {order} exceeds independence {inst.independence}: the "
            "moment is not determined by q-wise independence")
    if order > table.q_max:
        raise PreconditionError(
            f"order {order} exceeds the Stirling table range {table.q_max}")


def raw_moment(inst: BallsBinsInstance, order: int, table: StirlingTable,
               frac_bits: int = DEFAULT_FRAC_BITS) -> MomentResult:
    """E S^order as an exact reduced rational, with a log2 enclosure."""
    _check_order(inst, order, table)
    M, N = inst.balls, inst.bins
    total = Fraction(0)
    for j in range(1, order + 1):
        total += Fraction(table.stirling(order, j) * falling_factorial(M, j),
                          N ** j)
    return MomentResult(inst, order, total, log2_fraction(total, frac_bits))


def moment_norm(inst: BallsBinsInstance, order: int, table: StirlingTable,
                frac_bits: int = DEFAULT_FRAC_BITS) -> FloatInterval:
    """Enclosure of (E S^order)**(1/order) with outward rounding."""
    value = raw_moment(inst, order, table, frac_bits).value
    return nth_root(value, order, frac_bits)


def moment_sandwich(M: int, order: int,
                    table: StirlingTable) -> tuple[Fraction, int]:
    """Exact bracket for E S^order in the M = N case.

    Returns (prod_{i=1..order} (1 - (i-1)/M) * B_order, B_order); the true
    moment lies between the two.
    """
    if M < 1:
        raise PreconditionError("moment_sandwich requires M >= 1")
    if order < 1:
        raise PreconditionError("moment_sandwich requires order >= 1")
    if order > table.q_max:
        raise PreconditionError(
            f"order {order} exceeds the Stirling table range {table.q_max}")
    bell = table.bell(order)
    prod = Fraction(1)
    for i in range(1, order + 1):
        prod *= Fraction(M - (i - 1), M)
    return prod * bell, bell
