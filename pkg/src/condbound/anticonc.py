"""Lower bounds on Pr[S >= tau] for the load S of one bin when M = N.

Two certificate variants are produced, both sound for every q-wise
independent family:

* ``exact-moment``: Paley-Zygmund applied to S^(q/2), thresholding at
  theta^(2/q) * ||S||_{q/2} with probability (1-theta)^2 (E S^{q/2})^2 / E S^q.
* ``bell-bound``: the closed form in Bell numbers: threshold
  (B_{q/2})^(2/q) / 2 and probability (1 - q^2/(2M)) (B_{q/2})^2 / (2 B_q).

Thresholds are reported as enclosures and always consumed through their
lower endpoint: {S >= tau} is a subset of {S >= tau.lo}, so every stated
certificate remains true after rounding.  Probabilities stay exact
rationals.  A certificate whose probability is not positive is vacuous
(it claims nothing) and is a first-class value, not an error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .combinat import StirlingTable
from .errors import CondboundError, PreconditionError
from .intervals import DEFAULT_FRAC_BITS, FloatInterval, nth_root
from .moments import BallsBinsInstance, raw_moment

VARIANT_EXACT = "exact-moment"
VARIANT_BELL = "bell-bound"


@dataclass(frozen=True)
class AntiConcentrationCertificate:
    """Pr[S >= threshold.lo] >= probability, unless vacuous."""

    q: int
    M: int
    threshold: FloatInterval
    probability: Fraction
    vacuous: bool
    variant: str
    theta: Fraction | None = None

    def __post_init__(self):
        if not self.vacuous and not 0 <= self.probability <= 1:
            raise PreconditionError("certificate probability outside [0, 1]")


def _check_q(q: int, table: StirlingTable):
    if q % 2 != 0:
        raise PreconditionError(f"q={q} must be even")
    if q < 4:
        raise PreconditionError(f"q={q} must be at least 4")
    if q > table.q_max:
        raise PreconditionError(f"q={q} exceeds the Stirling table range")


def pz_bound(inst: BallsBinsInstance, theta, table: StirlingTable,
             frac_bits: int = DEFAULT_FRAC_BITS) -> AntiConcentrationCertificate:
    """Paley-Zygmund certificate from the exact moments of the instance.

    Threshold: theta^(2/q) * ||S||_{q/2}, computed as the single root
    ((theta * E S^{q/2})^2)^(1/q).  Probability:
    (1-theta)^2 * (E S^{q/2})^2 / E S^q, exact.
    """
    theta = Fraction(theta)
    if not 0 < theta < 1:
        raise PreconditionError("pz_bound requires 0 < theta < 1")
    q = inst.independence
    _check_q(q, table)
    if inst.balls != inst.bins:
        raise PreconditionError("pz_bound is stated for M = N only")
    half = raw_moment(inst, q // 2, table, frac_bits).value
    full = raw_moment(inst, q, table, frac_bits).value
    threshold = nth_root((theta * half) ** 2, q, frac_bits)
    prob = (1 - theta) ** 2 * half ** 2 / full
    return AntiConcentrationCertificate(q, inst.balls, threshold, prob,
                                        vacuous=False, variant=VARIANT_EXACT,
                                        theta=theta)


def lemma2_certificate(q: int, M: int, table: StirlingTable,
                       frac_bits: int = DEFAULT_FRAC_BITS,
                       ) -> AntiConcentrationCertificate:
    """Bell-number certificate for M = N: threshold (B_{q/2})^(2/q) / 2,
    probability (1 - q^2/(2M)) * (B_{q/2})^2 / (2 B_q).

    Vacuous exactly when q^2 >= 2M.
    """
    _check_q(q, table)
    if M < 1:
        raise PreconditionError("lemma2_certificate requires M >= 1")
    bell_half = table.bell(q // 2)
    bell_full = table.bell(q)
    threshold = nth_root(Fraction(bell_half ** 2, 4 ** (q // 2)), q, frac_bits)
    prob = (1 - Fraction(q * q, 2 * M)) * Fraction(bell_half ** 2, 2 * bell_full)
    vacuous = q * q >= 2 * M
    if vacuous:
        prob = min(prob, Fraction(0))
    return AntiConcentrationCertificate(q, M, threshold, prob,
                                        vacuous=vacuous, variant=VARIANT_BELL)


def bell_bound_at_theta(q: int, M: int, theta, table: StirlingTable,
                        frac_bits: int = DEFAULT_FRAC_BITS,
                        ) -> AntiConcentrationCertificate:
    """Bell-number certificate with theta kept explicit: threshold
    theta^(2/q) * (B_{q/2})^(2/q), probability
    (1-theta)^2 * (1 - q^2/(2M)) * (B_{q/2})^2 / B_q.

    Setting theta = 1/q and relaxing theta^(2/q) and (1-theta)^2 to 1/2
    recovers lemma2_certificate.
    """
    theta = Fraction(theta)
    if not 0 < theta < 1:
        raise PreconditionError("bell_bound_at_theta requires 0 < theta < 1")
    _check_q(q, table)
    bell_half = table.bell(q // 2)
    bell_full = table.bell(q)
    threshold = nth_root((theta * bell_half) ** 2, q, frac_bits)
    prob = ((1 - theta) ** 2 * (1 - Fraction(q * q, 2 * M))
            * Fraction(bell_half ** 2, bell_full))
    vacuous = q * q >= 2 * M
    if vacuous:
        prob = min(prob, Fraction(0))
    return AntiConcentrationCertificate(q, M, threshold, prob,
                                        vacuous=vacuous, variant=VARIANT_BELL,
                                        theta=theta)


@dataclass(frozen=True)
class CertificateComparison:
    """Both certificate variants at theta = 1/q, with the ordering facts
    that make the Bell variant a relaxation of the exact-moment one."""

    q: int
    M: int
    theta: Fraction
    bell: AntiConcentrationCertificate
    exact: AntiConcentrationCertificate
    lemma2: AntiConcentrationCertificate
    bell_p_le_exact_p: bool
    exact_tau_le_bell_tau: bool


def certificate_ordering(q: int, M: int, table: StirlingTable,
                         frac_bits: int = DEFAULT_FRAC_BITS,
                         ) -> CertificateComparison:
    """Evaluate both variants at theta = 1/q and assert that the Bell
    variant's probability never exceeds the exact-moment one (it lower
    bounds the numerator and upper bounds the denominator)."""
    _check_q(q, table)
    cert_l2 = lemma2_certificate(q, M, table, frac_bits)
    if cert_l2.vacuous:
        raise PreconditionError(
            f"certificate_ordering requires a non-vacuous certificate "
            f"(q^2={q*q} >= 2M={2*M})")
    theta = Fraction(1, q)
    inst = BallsBinsInstance(M, M, q)
    cert_exact = pz_bound(inst, theta, table, frac_bits)
    cert_bell = bell_bound_at_theta(q, M, theta, table, frac_bits)
    p_ok = cert_bell.probability <= cert_exact.probability
    tau_ok = cert_exact.threshold.hi <= cert_bell.threshold.hi
    if not p_ok:
        raise CondboundError(
            "bell-bound probability exceeded the exact-moment probability; "
            "this contradicts the moment sandwich")
    return CertificateComparison(q, M, theta, cert_bell, cert_exact, cert_l2,
                                 p_ok, tau_ok)
