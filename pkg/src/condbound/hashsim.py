"""Genuine q-wise independent hash families and load experiments.

The family is polynomial evaluation over GF(2^w): a seed is the
coefficient vector of a degree-(q-1) polynomial, the hash of x is the top
``output_bits`` bits of the polynomial evaluated at x.  Values at any q
distinct points are exactly independent and uniform, so these families
validate the moment identities both empirically (Monte Carlo over seeds)
and exactly (exhaustive seed enumeration at small widths).

Determinism contract: every trial draws its seed from a counter-based
generator keyed by (master_seed, trial index), and all reductions run in
trial-index order, so reports are bit-identical regardless of how trials
are scheduled across threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .combinat import StirlingTable
from .errors import CapacityError, PreconditionError
from .gf2 import (TABLE_FIELD_BITS, default_modulus, gf_mul, tables_for)
from .moments import BallsBinsInstance, raw_moment

DEFAULT_SEED_ENUM_CAP = 1 << 24
DEFAULT_THROW_CAP = 1 << 30
_EXHAUSTIVE_ASSIGNMENT_CAP = 1 << 20


@dataclass(frozen=True)
class HashFamilySpec:
    """Degree-(q-1) polynomial evaluation over GF(2^w), truncated to the
    top output_bits bits."""

    field_bits: int
    degree: int
    output_bits: int
    modulus: int

    @classmethod
    def create(cls, field_bits: int, independence: int,
               output_bits: int | None = None,
               modulus: int | None = None) -> "HashFamilySpec":
        if output_bits is None:
            output_bits = field_bits
        if modulus is None:
            modulus = default_modulus(field_bits)
        return cls(field_bits, independence - 1, output_bits, modulus)

    def __post_init__(self):
        w = self.field_bits
        if self.degree < 0:
            raise PreconditionError("degree must be >= 0")
        if self.degree + 1 > (1 << w):
            raise PreconditionError(
                "q-wise independence requires q <= field size 2^w")
        if not 1 <= self.output_bits <= w:
            raise PreconditionError("output_bits must be in [1, field_bits]")
        if self.modulus.bit_length() - 1 != w:
            raise PreconditionError("modulus degree must equal field_bits")

    @property
    def independence(self) -> int:
        return self.degree + 1

    @property
    def seed_count(self) -> int:
        return 1 << (self.field_bits * (self.degree + 1))

    @property
    def bins(self) -> int:
        return 1 << self.output_bits


def evaluate_hash(spec: HashFamilySpec, seed, x: int) -> int:
    """Horner evaluation of the seed polynomial at x, truncated to bins.

    seed[i] is the coefficient of x^i.
    """
    seed = list(seed)
    if len(seed) != spec.degree + 1:
        raise PreconditionError(
            f"seed length {len(seed)} != degree+1 = {spec.degree + 1}")
    if not 0 <= x < (1 << spec.field_bits):
        raise PreconditionError("point outside the field")
    acc = 0
    for c in reversed(seed):
        acc = gf_mul(acc, x, spec.modulus) ^ c
    return acc >> (spec.field_bits - spec.output_bits)


@dataclass(frozen=True)
class SimulationConfig:
    family: HashFamilySpec
    trials: int
    master_seed: int
    balls: int | None = None          # default: all 2^w field elements
    moment_orders: tuple[int, ...] = (1, 2)
    thresholds: tuple[Fraction, ...] = ()
    throw_cap: int = DEFAULT_THROW_CAP

    def __post_init__(self):
        if self.trials < 1:
            raise PreconditionError("trials must be >= 1")
        q = self.family.independence
        for order in self.moment_orders:
            if order > q:
                raise PreconditionError(
                    f"moment order {order} exceeds independence {q}")

    @property
    def ball_count(self) -> int:
        return self.balls if self.balls is not None else 1 << self.family.field_bits


@dataclass(frozen=True)
class MomentStat:
    order: int
    mean: float
    se: float | None
    exact: Fraction | None


@dataclass(frozen=True)
class TailStat:
    threshold: Fraction
    frequency: float
    se: float | None


@dataclass(frozen=True)
class SimulationReport:
    config_echo: dict
    trials: int
    moments: tuple[MomentStat, ...]
    tails: tuple[TailStat, ...]
    histogram: tuple[tuple[int, int], ...]   # (load, count) over (trial, bin)
    se_defined: bool


def _int_threshold(threshold: Fraction) -> int:
    """Smallest integer load satisfying S >= threshold."""
    return max(0, -((-threshold.numerator) // threshold.denominator))


def _exact_references(M: int, N: int, q: int,
                      orders) -> dict[int, Fraction]:
    if not orders:
        return {}
    table = StirlingTable.build(max(orders))
    inst = BallsBinsInstance(M, N, q)
    return {k: raw_moment(inst, k, table).value for k in orders}


def _philox_rng(master_seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(key=master_seed, counter=trial << 128))


def _chunk_ranges(total: int, chunk: int = 2048):
    for start in range(0, total, chunk):
        yield start, min(start + chunk, total)


def _reduce_report(config_echo: dict, trials: int, orders, thresholds,
                   per_trial_moments: np.ndarray, per_trial_tails: np.ndarray,
                   hist_counts: np.ndarray,
                   exact_refs: dict[int, Fraction]) -> SimulationReport:
    se_defined = trials >= 2
    moments = []
    for idx, order in enumerate(orders):
        col = per_trial_moments[:, idx]
        mean = float(np.mean(col))
        se = float(np.std(col, ddof=1) / math.sqrt(trials)) if se_defined else None
        moments.append(MomentStat(order, mean, se, exact_refs.get(order)))
    tails = []
    for idx, thr in enumerate(thresholds):
        col = per_trial_tails[:, idx]
        freq = float(np.mean(col))
        se = float(np.std(col, ddof=1) / math.sqrt(trials)) if se_defined else None
        tails.append(TailStat(thr, freq, se))
    nz = np.nonzero(hist_counts)[0]
    histogram = tuple((int(s), int(hist_counts[s])) for s in nz)
    return SimulationReport(config_echo, trials, tuple(moments), tuple(tails),
                            histogram, se_defined)


def run_trials(config: SimulationConfig, threads: int = 1) -> SimulationReport:
    """Monte Carlo load experiment over random seeds of the family.

    Per trial: draw a seed, hash all balls, histogram the bin loads.  The
    per-trial statistic is the mean over bins (of S^order, or of the tail
    indicator), and the reported standard error is taken across trials;
    bins within one trial are correlated and are never treated as
    independent samples.
    """
    spec = config.family
    M = config.ball_count
    if M > (1 << spec.field_bits):
        raise PreconditionError("more balls than field elements")
    if M * config.trials > config.throw_cap:
        raise CapacityError(
            f"balls*trials = {M * config.trials} exceeds the throw cap "
            f"{config.throw_cap}")
    if spec.field_bits > TABLE_FIELD_BITS:
        raise CapacityError(
            f"vectorised trials support field_bits <= {TABLE_FIELD_BITS}")
    tables = tables_for(spec.field_bits, spec.modulus)
    N = spec.bins
    shift = spec.field_bits - spec.output_bits
    orders = tuple(config.moment_orders)
    thresholds = tuple(Fraction(t) for t in config.thresholds)
    int_thrs = [_int_threshold(t) for t in thresholds]
    xs = np.arange(M, dtype=np.int64)
    trials = config.trials

    per_trial_moments = np.empty((trials, len(orders)), dtype=np.float64)
    per_trial_tails = np.empty((trials, len(thresholds)), dtype=np.float64)
    hist_parts: dict[int, np.ndarray] = {}
    batch = max(1, (1 << 20) // max(M, N))

    def work(bounds):
        start, end = bounds
        hist = np.zeros(M + 1, dtype=np.int64)
        for b0 in range(start, end, batch):
            b1 = min(b0 + batch, end)
            coeffs = np.stack([
                _philox_rng(config.master_seed, t).integers(
                    0, 1 << spec.field_bits, size=spec.degree + 1,
                    dtype=np.int64)
                for t in range(b0, b1)])
            acc = np.broadcast_to(coeffs[:, spec.degree][:, None],
                                  (b1 - b0, M)).copy()
            for i in range(spec.degree - 1, -1, -1):
                acc = tables.mul_vec(acc, xs[None, :])
                acc ^= coeffs[:, i][:, None]
            offsets = np.arange(b1 - b0, dtype=np.int64) * N
            flat = ((acc >> shift) + offsets[:, None]).ravel()
            loads = np.bincount(flat, minlength=(b1 - b0) * N)
            loads = loads.reshape(b1 - b0, N)
            hist += np.bincount(loads.ravel(), minlength=M + 1)
            fl = loads.astype(np.float64)
            for idx, order in enumerate(orders):
                per_trial_moments[b0:b1, idx] = np.mean(fl ** order, axis=1)
            for idx, thr in enumerate(int_thrs):
                per_trial_tails[b0:b1, idx] = np.mean(loads >= thr, axis=1)
        hist_parts[start] = hist

    bounds_list = list(_chunk_ranges(trials, 8 * batch))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, bounds_list))
    else:
        for b in bounds_list:
            work(b)
    hist_counts = np.zeros(M + 1, dtype=np.int64)
    for start, _ in bounds_list:
        hist_counts += hist_parts[start]

    exact_refs = _exact_references(M, N, spec.independence, orders)
    echo = {"mode": "monte-carlo", "field_bits": spec.field_bits,
            "degree": spec.degree, "output_bits": spec.output_bits,
            "modulus": spec.modulus, "balls": M, "bins": N,
            "trials": trials, "master_seed": config.master_seed}
    return _reduce_report(echo, trials, orders, thresholds,
                          per_trial_moments, per_trial_tails, hist_counts,
                          exact_refs)


@dataclass(frozen=True)
class ExactLoadDistribution:
    """Distribution of the load of bin 0 over every seed of a family."""

    support: dict[int, Fraction] = field(default_factory=dict)

    def moment(self, order: int) -> Fraction:
        return sum((p * s ** order for s, p in self.support.items()),
                   Fraction(0))

    def tail_ge(self, threshold) -> Fraction:
        thr = Fraction(threshold)
        return sum((p for s, p in self.support.items() if s >= thr),
                   Fraction(0))

    def total(self) -> Fraction:
        return sum(self.support.values(), Fraction(0))


def exact_small_oracle(spec: HashFamilySpec,
                       seed_cap: int = DEFAULT_SEED_ENUM_CAP,
                       ) -> ExactLoadDistribution:
    """Exhaustive ground truth: enumerate every seed, record bin-0 loads."""
    n_seeds = spec.seed_count
    if n_seeds > seed_cap:
        raise CapacityError(
            f"{n_seeds} seeds exceed the enumeration cap {seed_cap}")
    w = spec.field_bits
    M = 1 << w
    if w <= TABLE_FIELD_BITS:
        tables = tables_for(w, spec.modulus)
        xs = np.arange(M, dtype=np.int64)
        shift = w - spec.output_bits
        counts = np.zeros(M + 1, dtype=np.int64)
        mask = M - 1
        chunk = max(1, (1 << 22) // M)
        for start, end in _chunk_ranges(n_seeds, chunk):
            seeds = np.arange(start, end, dtype=np.int64)
            coeffs = [(seeds >> (w * i)) & mask for i in range(spec.degree + 1)]
            acc = np.broadcast_to(coeffs[spec.degree][:, None],
                                  (len(seeds), M)).copy()
            for i in range(spec.degree - 1, -1, -1):
                acc = tables.mul_vec(acc, xs[None, :])
                acc ^= coeffs[i][:, None]
            loads = np.sum((acc >> shift) == 0, axis=1)
            counts += np.bincount(loads, minlength=M + 1)
    else:
        counts = np.zeros(M + 1, dtype=np.int64)
        for s in range(n_seeds):
            seed = [(s >> (w * i)) & (M - 1) for i in range(spec.degree + 1)]
            load = sum(1 for x in range(M)
                       if evaluate_hash(spec, seed, x) == 0)
            counts[load] += 1
    support = {int(s): Fraction(int(c), n_seeds)
               for s, c in enumerate(counts) if c}
    return ExactLoadDistribution(support)


def exhaustive_assignment_histogram(M: int, N: int) -> list[int]:
    """hist[s] = number of the N^M equiprobable assignments in which bin 0
    receives exactly s balls, by explicit enumeration."""
    total = N ** M
    if total > _EXHAUSTIVE_ASSIGNMENT_CAP:
        raise CapacityError(
            f"N^M = {total} exceeds the exhaustive assignment cap "
            f"{_EXHAUSTIVE_ASSIGNMENT_CAP}")
    hist = np.zeros(M + 1, dtype=np.int64)
    powers = [N ** p for p in range(M)]
    for start, end in _chunk_ranges(total, 1 << 22):
        idx = np.arange(start, end, dtype=np.int64)
        zeros = np.zeros(end - start, dtype=np.int64)
        for p in powers:
            zeros += (idx // p) % N == 0
        hist += np.bincount(zeros, minlength=M + 1)
    return [int(c) for c in hist]


def independent_oracle(M: int, N: int, orders, trials: int, master_seed: int,
                       thresholds=(), throw_cap: int = DEFAULT_THROW_CAP,
                       exhaustive: bool | None = None,
                       threads: int = 1) -> SimulationReport:
    """Fully independent balls-into-bins reference experiment.

    When N^M is small enough (and ``exhaustive`` is not False), sampling
    is replaced by exact enumeration of all assignments; the report then
    carries zero-noise means equal to the exact distribution's moments.
    """
    orders = tuple(orders)
    thresholds = tuple(Fraction(t) for t in thresholds)
    if exhaustive is None:
        exhaustive = N ** M <= _EXHAUSTIVE_ASSIGNMENT_CAP
    exact_refs = _exact_references(M, N, max(orders) if orders else 1, orders)
    if exhaustive:
        hist = exhaustive_assignment_histogram(M, N)
        total = N ** M
        dist = ExactLoadDistribution(
            {s: Fraction(c, total) for s, c in enumerate(hist) if c})
        moments = tuple(MomentStat(k, float(dist.moment(k)), None,
                                   exact_refs.get(k)) for k in orders)
        tails = tuple(TailStat(t, float(dist.tail_ge(t)), None)
                      for t in thresholds)
        histogram = tuple((s, c) for s, c in enumerate(hist) if c)
        echo = {"mode": "independent-exhaustive", "balls": M, "bins": N,
                "assignments": total, "master_seed": master_seed}
        return SimulationReport(echo, 1, moments, tails, histogram, False)

    if M * trials > throw_cap:
        raise CapacityError(
            f"balls*trials = {M * trials} exceeds the throw cap {throw_cap}")
    int_thrs = [_int_threshold(t) for t in thresholds]
    per_trial_moments = np.empty((trials, len(orders)), dtype=np.float64)
    per_trial_tails = np.empty((trials, len(thresholds)), dtype=np.float64)
    hist_parts: dict[int, np.ndarray] = {}
    batch = max(1, (1 << 20) // max(M, N))

    def work(bounds):
        start, end = bounds
        hist = np.zeros(M + 1, dtype=np.int64)
        for b0 in range(start, end, batch):
            b1 = min(b0 + batch, end)
            bins = np.stack([
                _philox_rng(master_seed, t).integers(0, N, size=M,
                                                     dtype=np.int64)
                for t in range(b0, b1)])
            offsets = np.arange(b1 - b0, dtype=np.int64) * N
            flat = (bins + offsets[:, None]).ravel()
            loads = np.bincount(flat, minlength=(b1 - b0) * N)
            loads = loads.reshape(b1 - b0, N)
            hist += np.bincount(loads.ravel(), minlength=M + 1)
            fl = loads.astype(np.float64)
            for idx, order in enumerate(orders):
                per_trial_moments[b0:b1, idx] = np.mean(fl ** order, axis=1)
            for idx, thr in enumerate(int_thrs):
                per_trial_tails[b0:b1, idx] = np.mean(loads >= thr, axis=1)
        hist_parts[start] = hist

    bounds_list = list(_chunk_ranges(trials, 8 * batch))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, bounds_list))
    else:
        for b in bounds_list:
            work(b)
    hist_counts = np.zeros(M + 1, dtype=np.int64)
    for start, _ in bounds_list:
        hist_counts += hist_parts[start]
    echo = {"mode": "independent-monte-carlo", "balls": M, "bins": N,
            "trials": trials, "master_seed": master_seed}
    return _reduce_report(echo, trials, orders, thresholds,
                          per_trial_moments, per_trial_tails, hist_counts,
                          exact_refs)
