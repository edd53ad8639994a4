"""Dyadic interval arithmetic with outward rounding.

Every quantity that is not an exact rational (logarithms, fractional
powers) is represented as a closed interval [lo, hi] whose endpoints are
dyadic rationals ``m / 2**frac_bits``.  All operations round outward, so
the represented real number is always contained in the result.  Exact
integer arithmetic only; the float unit is never involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError

DEFAULT_FRAC_BITS = 256

# extra working bits so that series truncation and intermediate rounding
# stay far below one output ulp
_GUARD = 32


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _iroot_seed(x: int, n: int) -> int:
    """An integer certainly >= x**(1/n), within ~2^-38 relative slack.

    Built from a float estimate of 2**(bit_length/n); the added margin
    dominates every float rounding error by orders of magnitude.
    """
    bits = x.bit_length()
    e = bits / n
    j = int(e)
    frac = e - j
    mantissa = int(math.ldexp(2.0 ** frac, 52)) + 1
    r = (mantissa << j) >> 52 if j >= 52 else mantissa >> (52 - j)
    return r + (r >> 38) + 2


def iroot_floor(x: int, n: int) -> int:
    """Largest r >= 0 with r**n <= x, by integer Newton iteration."""
    if x < 0:
        raise PreconditionError("iroot_floor requires x >= 0")
    if n < 1:
        raise PreconditionError("iroot_floor requires n >= 1")
    if x == 0:
        return 0
    if n == 1:
        return x
    # Newton from above converges monotonically to the floor root as long
    # as the seed is >= the true root; the exactness check at the end
    # guards the seed construction.
    r = _iroot_seed(x, n)
    while True:
        nr = ((n - 1) * r + x // r ** (n - 1)) // n
        if nr >= r:
            break
        r = nr
    while r ** n > x:
        r -= 1
    while (r + 1) ** n <= x:
        r += 1
    return r


def iroot_ceil(x: int, n: int) -> int:
    """Smallest r >= 0 with r**n >= x."""
    r = iroot_floor(x, n)
    return r if r ** n == x else r + 1


def _scale_fraction(fr: Fraction, frac_bits: int) -> tuple[int, int]:
    """Outward-rounded (lo_scaled, hi_scaled) of a rational at 2**-frac_bits."""
    t = fr.numerator << frac_bits
    lo = _floor_div(t, fr.denominator)
    hi = _ceil_div(t, fr.denominator)
    return lo, hi


@dataclass(frozen=True)
class FloatInterval:
    """Certified enclosure [lo, hi] with dyadic endpoints at 2**-frac_bits."""

    lo_scaled: int
    hi_scaled: int
    frac_bits: int = DEFAULT_FRAC_BITS

    def __post_init__(self):
        if self.lo_scaled > self.hi_scaled:
            raise PreconditionError("interval endpoints out of order")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_fraction(cls, fr, frac_bits: int = DEFAULT_FRAC_BITS) -> "FloatInterval":
        fr = Fraction(fr)
        lo, hi = _scale_fraction(fr, frac_bits)
        return cls(lo, hi, frac_bits)

    @classmethod
    def from_int(cls, n: int, frac_bits: int = DEFAULT_FRAC_BITS) -> "FloatInterval":
        return cls(n << frac_bits, n << frac_bits, frac_bits)

    @classmethod
    def from_bounds(cls, lo, hi, frac_bits: int = DEFAULT_FRAC_BITS) -> "FloatInterval":
        slo, _ = _scale_fraction(Fraction(lo), frac_bits)
        _, shi = _scale_fraction(Fraction(hi), frac_bits)
        return cls(slo, shi, frac_bits)

    # -- accessors ---------------------------------------------------------

    @property
    def lo(self) -> Fraction:
        return Fraction(self.lo_scaled, 1 << self.frac_bits)

    @property
    def hi(self) -> Fraction:
        return Fraction(self.hi_scaled, 1 << self.frac_bits)

    @property
    def width(self) -> Fraction:
        return Fraction(self.hi_scaled - self.lo_scaled, 1 << self.frac_bits)

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, value) -> bool:
        v = Fraction(value)
        return self.lo <= v <= self.hi

    def __float__(self) -> float:
        return float(self.midpoint())

    def __repr__(self):
        return f"FloatInterval(~{float(self):.12g}, width=2^{self.width_log2()})"

    def width_log2(self) -> int:
        w = self.hi_scaled - self.lo_scaled
        return w.bit_length() - self.frac_bits if w else -(10 ** 9)

    # -- arithmetic (outward) ----------------------------------------------

    def _check(self, other: "FloatInterval"):
        if self.frac_bits != other.frac_bits:
            raise PreconditionError("mixed frac_bits in interval arithmetic")

    def __add__(self, other: "FloatInterval") -> "FloatInterval":
        self._check(other)
        return FloatInterval(self.lo_scaled + other.lo_scaled,
                             self.hi_scaled + other.hi_scaled, self.frac_bits)

    def __sub__(self, other: "FloatInterval") -> "FloatInterval":
        self._check(other)
        return FloatInterval(self.lo_scaled - other.hi_scaled,
                             self.hi_scaled - other.lo_scaled, self.frac_bits)

    def __neg__(self) -> "FloatInterval":
        return FloatInterval(-self.hi_scaled, -self.lo_scaled, self.frac_bits)

    def __mul__(self, other: "FloatInterval") -> "FloatInterval":
        self._check(other)
        fb = self.frac_bits
        prods = [self.lo_scaled * other.lo_scaled, self.lo_scaled * other.hi_scaled,
                 self.hi_scaled * other.lo_scaled, self.hi_scaled * other.hi_scaled]
        return FloatInterval(_floor_div(min(prods), 1 << fb),
                             _ceil_div(max(prods), 1 << fb), fb)

    def __truediv__(self, other: "FloatInterval") -> "FloatInterval":
        self._check(other)
        if other.lo_scaled <= 0 <= other.hi_scaled:
            raise PreconditionError("interval division by an interval containing 0")
        fb = self.frac_bits
        quots = [Fraction(a, b) for a in (self.lo_scaled, self.hi_scaled)
                 for b in (other.lo_scaled, other.hi_scaled)]
        lo, _ = _scale_fraction(min(quots), fb)
        _, hi = _scale_fraction(max(quots), fb)
        return FloatInterval(lo, hi, fb)

    def scale(self, fr) -> "FloatInterval":
        """Multiply by an exact rational, outward rounded."""
        fr = Fraction(fr)
        fb = self.frac_bits
        cands = [self.lo * fr, self.hi * fr]
        lo, _ = _scale_fraction(min(cands), fb)
        _, hi = _scale_fraction(max(cands), fb)
        return FloatInterval(lo, hi, fb)

    def shift(self, fr) -> "FloatInterval":
        """Add an exact rational, outward rounded."""
        fr = Fraction(fr)
        fb = self.frac_bits
        lo, _ = _scale_fraction(self.lo + fr, fb)
        _, hi = _scale_fraction(self.hi + fr, fb)
        return FloatInterval(lo, hi, fb)

    def divide_by_int(self, n: int) -> "FloatInterval":
        if n <= 0:
            raise PreconditionError("divide_by_int requires n > 0")
        return FloatInterval(_floor_div(self.lo_scaled, n),
                             _ceil_div(self.hi_scaled, n), self.frac_bits)

    # -- certified comparisons ---------------------------------------------

    def certainly_lt(self, other) -> bool:
        if isinstance(other, FloatInterval):
            return self.hi < other.lo
        return self.hi < Fraction(other)

    def certainly_le(self, other) -> bool:
        if isinstance(other, FloatInterval):
            return self.hi <= other.lo
        return self.hi <= Fraction(other)

    def certainly_gt(self, other) -> bool:
        if isinstance(other, FloatInterval):
            return self.lo > other.hi
        return self.lo > Fraction(other)

    def certainly_ge(self, other) -> bool:
        if isinstance(other, FloatInterval):
            return self.lo >= other.hi
        return self.lo >= Fraction(other)


# -- fixed point series kernels (positive domain, directed rounding) -------
#
# Internally numbers are integers scaled by 2**prec.  *_down / *_up name the
# rounding direction of the returned value.

def _mul_down(a: int, b: int, prec: int) -> int:
    return _floor_div(a * b, 1 << prec)


def _mul_up(a: int, b: int, prec: int) -> int:
    return _ceil_div(a * b, 1 << prec)


def _div_down(a: int, b: int, prec: int) -> int:
    return _floor_div(a << prec, b)


def _div_up(a: int, b: int, prec: int) -> int:
    return _ceil_div(a << prec, b)


def _atanh_series(u_lo: int, u_hi: int, prec: int) -> tuple[int, int]:
    """Bounds for 2*atanh(u) = 2*sum u^(2k+1)/(2k+1), 0 <= u <= 1/2.

    Inputs are scaled by 2**prec.  The tail after the last kept term is
    bounded by the geometric series t_last * u^2 / (1 - u^2) with
    1/(1-u^2) <= 4/3 for u <= 1/2.
    """
    if not 0 <= u_lo <= u_hi <= (1 << prec) // 2 + 1:
        raise PreconditionError("atanh series requires 0 <= u <= 1/2")
    usq_lo = _mul_down(u_lo, u_lo, prec)
    usq_hi = _mul_up(u_hi, u_hi, prec)
    lo_sum, hi_sum = u_lo, u_hi
    pow_lo, pow_hi = u_lo, u_hi
    k = 1
    while True:
        pow_lo = _mul_down(pow_lo, usq_lo, prec)
        pow_hi = _mul_up(pow_hi, usq_hi, prec)
        term_lo = _floor_div(pow_lo, 2 * k + 1)
        term_hi = _ceil_div(pow_hi, 2 * k + 1)
        lo_sum += term_lo
        hi_sum += term_hi
        if pow_hi <= 1:
            break
        k += 1
    # tail bound from the first omitted term
    tail_hi = _mul_up(pow_hi, usq_hi, prec)
    tail_hi = _ceil_div(tail_hi, 2 * k + 3)
    tail_hi = _ceil_div(4 * tail_hi, 3) + 1
    return 2 * lo_sum, 2 * (hi_sum + tail_hi)


def _ln2_scaled(prec: int) -> tuple[int, int]:
    """Bounds for ln 2 = 2*atanh(1/3), scaled by 2**prec."""
    u_lo = _floor_div(1 << prec, 3)
    u_hi = _ceil_div(1 << prec, 3)
    return _atanh_series(u_lo, u_hi, prec)


_LN2_CACHE: dict[int, tuple[int, int]] = {}


def _ln2(prec: int) -> tuple[int, int]:
    if prec not in _LN2_CACHE:
        _LN2_CACHE[prec] = _ln2_scaled(prec)
    return _LN2_CACHE[prec]


def _ln_mantissa(m_lo: int, m_hi: int, prec: int) -> tuple[int, int]:
    """Bounds for ln(m) with 1 <= m < 2, via ln m = 2*atanh((m-1)/(m+1))."""
    one = 1 << prec
    u_lo = _div_down(m_lo - one, m_lo + one, prec)
    u_hi = _div_up(m_hi - one, m_hi + one, prec)
    return _atanh_series(max(u_lo, 0), u_hi, prec)


def _ln_big_scaled(x: int, prec: int) -> tuple[int, int]:
    """Bounds for ln(x), x >= 1 integer, scaled by 2**prec."""
    e = x.bit_length() - 1
    # mantissa m = x / 2**e in [1, 2), directed to prec bits
    if e >= prec:
        m_lo = _floor_div(x, 1 << (e - prec))
        m_hi = _ceil_div(x, 1 << (e - prec))
    else:
        m_lo = m_hi = x << (prec - e)
    ln_m_lo, ln_m_hi = _ln_mantissa(m_lo, m_hi, prec)
    l2_lo, l2_hi = _ln2(prec)
    return e * l2_lo + ln_m_lo, e * l2_hi + ln_m_hi


def _round_out(lo: int, hi: int, prec: int, frac_bits: int) -> FloatInterval:
    shift = prec - frac_bits
    return FloatInterval(_floor_div(lo, 1 << shift), _ceil_div(hi, 1 << shift),
                         frac_bits)


def log2_interval(x: int, frac_bits: int = DEFAULT_FRAC_BITS) -> FloatInterval:
    """Certified enclosure of log2(x) for an integer x >= 1.

    Exact powers of two give a zero width interval; otherwise the width is
    at most 2**(-frac_bits + 2).
    """
    if x < 1:
        raise PreconditionError("log2_interval requires x >= 1")
    e = x.bit_length() - 1
    if x == 1 << e:
        return FloatInterval.from_int(e, frac_bits)
    prec = frac_bits + _GUARD
    ln_lo, ln_hi = _ln_big_scaled(x, prec)
    l2_lo, l2_hi = _ln2(prec)
    # ln(x)/ln(2), all-positive quotient bounds
    q_lo = _div_down(ln_lo, l2_hi, prec)
    q_hi = _div_up(ln_hi, l2_lo, prec)
    return _round_out(q_lo, q_hi, prec, frac_bits)


def log2_fraction(fr, frac_bits: int = DEFAULT_FRAC_BITS) -> FloatInterval:
    """Certified enclosure of log2(num/den) for a positive rational."""
    fr = Fraction(fr)
    if fr <= 0:
        raise PreconditionError("log2_fraction requires a positive argument")
    prec = frac_bits + _GUARD
    num, den = fr.numerator, fr.denominator
    if num == 1 << (num.bit_length() - 1) and den == 1 << (den.bit_length() - 1):
        e = (num.bit_length() - 1) - (den.bit_length() - 1)
        return FloatInterval.from_int(e, frac_bits)
    n_lo, n_hi = _ln_big_scaled(num, prec)
    d_lo, d_hi = _ln_big_scaled(den, prec)
    l2_lo, l2_hi = _ln2(prec)
    diff_lo, diff_hi = n_lo - d_hi, n_hi - d_lo
    q_lo = min(_div_down(diff_lo, l2_hi, prec), _div_down(diff_lo, l2_lo, prec))
    q_hi = max(_div_up(diff_hi, l2_lo, prec), _div_up(diff_hi, l2_hi, prec))
    return _round_out(q_lo, q_hi, prec, frac_bits)


def ln_interval_of_int(x: int, frac_bits: int = DEFAULT_FRAC_BITS) -> FloatInterval:
    """Certified enclosure of ln(x) for an integer x >= 1."""
    if x < 1:
        raise PreconditionError("ln_interval_of_int requires x >= 1")
    prec = frac_bits + _GUARD
    lo, hi = _ln_big_scaled(x, prec)
    return _round_out(lo, hi, prec, frac_bits)


def _ln_positive_fraction(fr: Fraction, prec: int) -> tuple[int, int]:
    """Scaled bounds for ln(fr), fr > 0, via ln(num) - ln(den)."""
    n_lo, n_hi = _ln_big_scaled(fr.numerator, prec)
    d_lo, d_hi = _ln_big_scaled(fr.denominator, prec)
    return n_lo - d_hi, n_hi - d_lo


def ln_interval(x, frac_bits: int = DEFAULT_FRAC_BITS) -> FloatInterval:
    """Certified enclosure of ln(x) for a positive rational or interval."""
    prec = frac_bits + _GUARD
    if isinstance(x, FloatInterval):
        if x.lo_scaled <= 0:
            raise PreconditionError("ln_interval requires a positive argument")
        lo, _ = _ln_positive_fraction(x.lo, prec)
        _, hi = _ln_positive_fraction(x.hi, prec)
        return _round_out(lo, hi, prec, frac_bits)
    fr = Fraction(x)
    if fr <= 0:
        raise PreconditionError("ln_interval requires a positive argument")
    lo, hi = _ln_positive_fraction(fr, prec)
    return _round_out(lo, hi, prec, frac_bits)


def nth_root(fr, n: int, frac_bits: int = DEFAULT_FRAC_BITS) -> FloatInterval:
    """Certified enclosure of fr**(1/n) for a nonnegative rational fr.

    The endpoints are the tightest dyadics at the working precision:
    lo**n <= fr <= hi**n exactly.
    """
    fr = Fraction(fr)
    if fr < 0:
        raise PreconditionError("nth_root requires a nonnegative argument")
    if n < 1:
        raise PreconditionError("nth_root requires n >= 1")
    prec = frac_bits + _GUARD
    num, den = fr.numerator, fr.denominator
    t = num << (n * prec)
    lo = iroot_floor(t // den, n)
    hi = iroot_ceil(_ceil_div(t, den), n)
    return _round_out(lo, hi, prec, frac_bits)


def pow_fraction(fr, num: int, den: int,
                 frac_bits: int = DEFAULT_FRAC_BITS) -> FloatInterval:
    """Certified enclosure of fr**(num/den) for fr > 0 and num, den >= 1."""
    fr = Fraction(fr)
    if fr <= 0:
        raise PreconditionError("pow_fraction requires a positive base")
    return nth_root(fr ** num, den, frac_bits)


# -- dyadic string form ------------------------------------------------------

def dyadic_str(fr) -> str:
    """Render an exact dyadic rational as 'm' or 'm/2^k' (reduced)."""
    fr = Fraction(fr)
    den = fr.denominator
    if den & (den - 1):
        raise PreconditionError("dyadic_str requires a power-of-two denominator")
    k = den.bit_length() - 1
    if k == 0:
        return str(fr.numerator)
    return f"{fr.numerator}/2^{k}"


def parse_dyadic(s: str) -> Fraction:
    """Inverse of dyadic_str; also accepts plain integers and decimals."""
    s = s.strip()
    if "/2^" in s:
        m, k = s.split("/2^")
        return Fraction(int(m), 1 << int(k))
    fr = Fraction(s)
    if fr.denominator & (fr.denominator - 1):
        raise PreconditionError(f"value {s!r} is not a dyadic rational")
    return fr


def interval_to_strings(iv: FloatInterval) -> dict:
    return {"lo": dyadic_str(iv.lo), "hi": dyadic_str(iv.hi)}
