"""Closed-form growth estimates for Bell numbers, with residual tracking.

The leading-order estimate ln(B_q)/q ~ ln q - ln ln q - 1 (the same form
bounds max_j ln S(q, j) / q) carries an uninstantiated correction term, so
nothing downstream ever relies on it: certificates use exact Bell numbers
and this module only quantifies how tight the closed form is.  Internally
everything is on the natural-log scale; conversion to base 2 happens at
reporting boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionError
from .intervals import DEFAULT_FRAC_BITS, FloatInterval, ln_interval_of_int, ln_interval


@dataclass(frozen=True)
class AsymptoticEstimate:
    q: int
    estimate: FloatInterval        # ln q - ln ln q - 1
    exact: FloatInterval           # ln(B_q) / q
    residual: FloatInterval        # exact - estimate
    scaled_residual: FloatInterval  # residual * ln q / ln ln q


def _check_q(q: int):
    if q < 3:
        raise PreconditionError("estimate requires q >= 3 (ln ln q positive)")


def stirling_max_log_estimate(q: int,
                              frac_bits: int = DEFAULT_FRAC_BITS) -> FloatInterval:
    """Enclosure of ln q - ln ln q - 1, the per-q leading order of
    max_j ln S(q, j)."""
    _check_q(q)
    ln_q = ln_interval_of_int(q, frac_bits)
    ln_ln_q = ln_interval(ln_q, frac_bits)
    return (ln_q - ln_ln_q).shift(-1)


def bell_log_estimate(q: int,
                      frac_bits: int = DEFAULT_FRAC_BITS) -> FloatInterval:
    """Enclosure of the same closed form for ln(B_q)/q; the leading terms
    coincide with the Stirling-maximum estimate."""
    return stirling_max_log_estimate(q, frac_bits)


def estimate_residual(q: int, bells,
                      frac_bits: int = DEFAULT_FRAC_BITS) -> AsymptoticEstimate:
    """Exact ln(B_q)/q against the closed form.

    ``bells`` is anything with a ``bell(q)`` accessor (StirlingTable or
    BellSequence).  scaled_residual multiplies by ln q / ln ln q, the
    reciprocal of the correction term's stated decay.
    """
    _check_q(q)
    estimate = bell_log_estimate(q, frac_bits)
    exact = ln_interval_of_int(bells.bell(q), frac_bits).divide_by_int(q)
    residual = exact - estimate
    ln_q = ln_interval_of_int(q, frac_bits)
    ln_ln_q = ln_interval(ln_q, frac_bits)
    scaled = residual * (ln_q / ln_ln_q)
    return AsymptoticEstimate(q, estimate, exact, residual, scaled)


def sandwich_holds(q: int, bells) -> bool:
    """Exact check of max_j S(q,j) <= B_q <= q * max_j S(q,j) for q >= 1."""
    if q < 1:
        raise PreconditionError("sandwich is stated for q >= 1")
    mx = bells.row_max(q)
    b = bells.bell(q)
    return mx <= b <= q * mx
