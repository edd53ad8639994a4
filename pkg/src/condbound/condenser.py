"""Feasibility analysis for min-entropy condensers built from q-universal
hashing, in the square regime k = m (source entropy equals output width).

Positive side: a q-universal family condenses with quality eps = 2^-q at
loss log2(q).  Negative side: for M = N = 2^k, the anti-concentration
certificate (tau, p) turns into a concrete impossibility region through a
heavy-bin distinguisher against the flat source uniform on all 2^k inputs:

* real side: a bin of load >= tau holds mass >= tau/M, and a fraction >= p
  of bins is that heavy in expectation over the seed, so the output lands
  in a currently-heavy bin with probability >= p*tau (using N = M);
* ideal side: any per-seed distribution with min-entropy m - ell puts at
  most 2^(ell-k) on each bin, hence at most (heavy count)*2^(ell-k) on the
  heavy set.

Averaging over seeds gives statistical distance >= p*(tau - 2^ell) for
every loss ell <= log2(tau).  The exposed corner is ell_star =
log2(tau.lo) - 1 with eps_star = p*tau.lo/2, both exact.  Closeness is
read jointly with the seed (the comparison distribution may depend on the
seed and must have min-entropy m - ell for each seed); without that
convention the seed-averaged output is exactly uniform and no lower bound
exists.

Asymptotic shorthands never produce numbers here: every reported value
comes from exact Bell arithmetic, and the closed-form trend is attached to
reports for comparison only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .anticonc import AntiConcentrationCertificate, lemma2_certificate
from .combinat import StirlingTable
from .errors import CapacityError, PreconditionError
from .intervals import DEFAULT_FRAC_BITS, FloatInterval, log2_fraction

FEASIBLE_POSITIVE = "positive"
FEASIBLE_IMPOSSIBLE = "impossible"
FEASIBLE_UNDETERMINED = "undetermined"

# Externally published parameter pairs for side-by-side display; the
# derivation behind them is not restated by the computation, so reports
# show both and flag any discrepancy instead of silently matching.
REFERENCE_CLAIMS = {
    (64, 43): {"loss": Fraction("2.6"), "log2_inv_eps": Fraction(43)},
}


@dataclass(frozen=True)
class CondenserParams:
    """Parameter record in the k = m regime; absent fields are symbolic."""

    independence: int
    loss_bits: Fraction | None
    log2_inv_eps: Fraction | None
    entropy_k: int | None = None
    output_m: int | None = None
    input_n: int | None = None
    seed_bits: int | None = None


@dataclass(frozen=True)
class HeavyBinReduction:
    tau_lo: Fraction                 # dyadic, lower enclosure endpoint
    ell_star: FloatInterval          # log2(tau_lo) - 1
    epsilon_star: Fraction           # p * tau_lo / 2, exact
    log2_eps_star: FloatInterval


@dataclass(frozen=True)
class CondenserVerdict:
    params: CondenserParams
    feasible: str
    certificate: AntiConcentrationCertificate
    reduction: HeavyBinReduction | None
    target_covered: bool | None = None
    reference_claim: dict | None = None


def positive_params(log2_inv_eps) -> CondenserParams:
    """Achievable parameters: q = ceil(log2(1/eps)), loss = log2 q, k = m."""
    L = Fraction(log2_inv_eps)
    if L <= 1:
        raise PreconditionError("positive_params requires eps < 1/2")
    q = math.ceil(L)
    return CondenserParams(independence=q, loss_bits=Fraction(math.log2(q)),
                           log2_inv_eps=L)


def _check_side_condition(q: int, k: int):
    if k < 1:
        raise PreconditionError("impossibility requires k >= 1")
    if (1 << k) <= q * q:
        raise PreconditionError(
            f"side condition k > 2*log2(q) violated: 2^{k} <= {q}^2")


def _coerce_target(value) -> Fraction | None:
    if value is None:
        return None
    if isinstance(value, str):
        return Fraction(value)
    return Fraction(value)


def heavy_bin_reduction(cert: AntiConcentrationCertificate,
                        frac_bits: int = DEFAULT_FRAC_BITS) -> HeavyBinReduction:
    """Exact (ell_star, eps_star) corner of the ruled-out region."""
    tau_lo = cert.threshold.lo
    if tau_lo <= 0:
        raise PreconditionError("reduction requires a positive threshold")
    ell_star = log2_fraction(tau_lo, frac_bits).shift(-1)
    eps_star = cert.probability * tau_lo / 2
    return HeavyBinReduction(tau_lo, ell_star, eps_star,
                             log2_fraction(eps_star, frac_bits))


def impossibility_certificate(q: int, k: int, table: StirlingTable,
                              loss=None, log2_inv_eps=None,
                              frac_bits: int = DEFAULT_FRAC_BITS,
                              ) -> CondenserVerdict:
    """Impossibility verdict for q-universal condensing at k = m.

    Rules out every (loss, eps) with loss <= ell_star and eps < eps_star.
    With a concrete target supplied, ``feasible`` reports whether that
    target is certifiably inside the region; without one, the verdict is
    ``impossible`` as soon as the region reaches nonnegative losses.
    """
    loss = _coerce_target(loss)
    log2_inv_eps = _coerce_target(log2_inv_eps)
    _check_side_condition(q, k)
    M = 1 << k
    cert = lemma2_certificate(q, M, table, frac_bits)
    params = CondenserParams(independence=q, loss_bits=loss,
                             log2_inv_eps=log2_inv_eps,
                             entropy_k=k, output_m=k)
    reference = _reference_block(q, k)
    if cert.vacuous:
        if reference is not None:
            reference = dict(reference)
            reference["claim_covered_by_certificate"] = False
        return CondenserVerdict(params, FEASIBLE_UNDETERMINED, cert, None,
                                None, reference)
    red = heavy_bin_reduction(cert, frac_bits)

    if loss is None and log2_inv_eps is None:
        region_nonempty = red.ell_star.certainly_ge(0)
        feasible = FEASIBLE_IMPOSSIBLE if region_nonempty else FEASIBLE_UNDETERMINED
        verdict_covered = None
    else:
        loss_ok = (red.ell_star.certainly_ge(0) if loss is None
                   else red.ell_star.certainly_ge(loss))
        eps_ok = (True if log2_inv_eps is None
                  else red.log2_eps_star.certainly_gt(-log2_inv_eps))
        verdict_covered = loss_ok and eps_ok
        feasible = FEASIBLE_IMPOSSIBLE if verdict_covered else FEASIBLE_UNDETERMINED
    if reference is not None:
        reference = dict(reference)
        reference["claim_covered_by_certificate"] = (
            red.ell_star.certainly_ge(reference["loss"])
            and red.log2_eps_star.certainly_gt(-reference["log2_inv_eps"]))
    return CondenserVerdict(params, feasible, cert, red, verdict_covered,
                            reference)


def _reference_block(q: int, k: int) -> dict | None:
    claim = REFERENCE_CLAIMS.get((q, k))
    if claim is None:
        return None
    return {"loss": claim["loss"], "log2_inv_eps": claim["log2_inv_eps"]}


def _search_window(k: int, table: StirlingTable) -> list[int]:
    top = table.q_max
    while top >= 4 and (1 << k) <= top * top:
        top -= 1
    qs = [q for q in range(4, top + 1) if q % 2 == 0]
    if not qs:
        raise PreconditionError(
            f"no even q >= 4 satisfies the side condition at k={k}")
    return qs


def _eps_condition(q: int, k: int, table: StirlingTable, neg_L: Fraction,
                   frac_bits: int) -> tuple[bool, FloatInterval]:
    """Fast certified enclosure of log2(eps_star) without materialising the
    threshold: log2(p) + log2(B_{q/2}^2)/q - 2.

    This uses the true threshold value rather than its rounded-down
    endpoint; the two differ by far less than one enclosure ulp, and the
    returned q is re-verified through the authoritative certificate.
    """
    bell_half = table.bell(q // 2)
    bell_full = table.bell(q)
    p = ((1 - Fraction(q * q, 2 << k))
         * Fraction(bell_half * bell_half, 2 * bell_full))
    if p <= 0:
        raise PreconditionError("eps condition evaluated on a vacuous point")
    log2_tau = (log2_fraction(Fraction(bell_half * bell_half), frac_bits)
                .divide_by_int(q).shift(-1))
    log2_eps_star = log2_fraction(p, frac_bits) + log2_tau.shift(-1)
    return log2_eps_star.certainly_gt(neg_L), log2_eps_star


def necessary_independence(log2_inv_eps, k: int, loss, table: StirlingTable,
                           frac_bits: int = DEFAULT_FRAC_BITS) -> int | None:
    """Largest even q whose certificate rules out the target (loss, eps).

    Certificates at lower independence transfer upward (a q'-universal
    family is q-universal for q <= q'), so the returned q is the top of
    the ruled-out band; the positive route to the target quality needs
    independence beyond it.  Returns None when no q in the admissible
    window rules the target out; raises CapacityError when the band is
    still open at the top of the table (q_max too small to locate it).

    The search is a binary search over even q, justified by the exact
    monotonicity of log2(eps_star); any probe pair contradicting that
    order falls back to a linear scan.
    """
    L = _coerce_target(log2_inv_eps)
    loss = _coerce_target(loss)
    if L is None or loss is None:
        raise PreconditionError("necessary_independence needs loss and eps targets")
    qs = _search_window(k, table)
    neg_L = -L
    evals: dict[int, tuple[bool, FloatInterval]] = {}

    def eps_ok(q: int) -> bool:
        if q not in evals:
            evals[q] = _eps_condition(q, k, table, neg_L, frac_bits)
        return evals[q][0]

    if eps_ok(qs[-1]):
        raise CapacityError(
            f"search window exhausted: eps_star at q={qs[-1]} still exceeds "
            "the target; rebuild with a larger table")
    if not eps_ok(qs[0]):
        return None

    lo_idx, hi_idx = 0, len(qs) - 1
    monotone = True
    while hi_idx - lo_idx > 1:
        mid = (lo_idx + hi_idx) // 2
        if eps_ok(qs[mid]):
            lo_idx = mid
        else:
            hi_idx = mid
    probed = sorted(evals.items())
    for (q1, (_, iv1)), (q2, (_, iv2)) in zip(probed, probed[1:]):
        if not iv2.certainly_lt(iv1):
            monotone = False
            break
    if not monotone:
        best = None
        for q in qs:
            if eps_ok(q):
                best = q
        if best is None:
            return None
        lo_idx = qs.index(best)
    q_best = qs[lo_idx]
    verdict = impossibility_certificate(q_best, k, table, loss=loss,
                                        log2_inv_eps=L, frac_bits=frac_bits)
    if verdict.feasible == FEASIBLE_IMPOSSIBLE:
        return q_best
    return None


@dataclass(frozen=True)
class GapRow:
    log2_inv_eps: Fraction
    q_plus: int
    q_minus: int | None
    ratio: Fraction | None
    band_lo: float
    band_hi: float
    within_band: bool | None


def asymptotic_gap_report(log2_inv_eps_list, k: int, table: StirlingTable,
                          loss=Fraction(1),
                          frac_bits: int = DEFAULT_FRAC_BITS) -> list[GapRow]:
    """Positive q+ versus certified q- per target quality.

    The attached band is the closed-form trend 1 +/- logloglog(1/eps) /
    loglog(1/eps) with unit constant, reported for comparison only (the
    true implied constant is not instantiated anywhere).
    """
    rows = []
    for L in log2_inv_eps_list:
        L = Fraction(L)
        q_plus = positive_params(L).independence
        q_minus = necessary_independence(L, k, loss, table, frac_bits)
        ratio = None if q_minus is None else Fraction(q_minus) / L
        loglog = math.log2(math.log2(float(L)))
        half_width = loglog / math.log2(float(L))
        band_lo, band_hi = 1 - half_width, 1 + half_width
        within = None if ratio is None else band_lo <= float(ratio) <= band_hi
        rows.append(GapRow(L, q_plus, q_minus, ratio, band_lo, band_hi, within))
    return rows
