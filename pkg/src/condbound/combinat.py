"""Arbitrary-precision Stirling numbers of the second kind and Bell numbers.

Everything here is exact integer arithmetic.  The triangle is built with
the two-term recurrence S(q, j) = j*S(q-1, j) + S(q-1, j-1); Bell numbers
are row sums.  A streaming builder keeps only two rows for callers that
need Bell numbers (and per-row maxima) without the full triangle.
"""

from __future__ import annotations

import math
import struct

from .errors import CapacityError, PreconditionError
from .intervals import DEFAULT_FRAC_BITS, FloatInterval, log2_interval

DEFAULT_QMAX_CAP = 2048


def binomial(n: int, k: int) -> int:
    """n choose k; 0 when k > n."""
    if k < 0:
        raise PreconditionError("binomial requires k >= 0")
    if n < 0:
        raise PreconditionError("binomial requires n >= 0")
    return math.comb(n, k)


def falling_factorial(n: int, k: int) -> int:
    """n*(n-1)*...*(n-k+1); 0 when k > n, 1 when k = 0."""
    if k < 0:
        raise PreconditionError("falling_factorial requires k >= 0")
    if n < 0:
        raise PreconditionError("falling_factorial requires n >= 0")
    return math.perm(n, k)


class StirlingTable:
    """Full triangle rows[q][j] = S(q, j) for 0 <= j <= q <= q_max."""

    def __init__(self, rows: list[list[int]]):
        self.rows = rows
        self.q_max = len(rows) - 1
        self._bells: BellSequence | None = None

    @classmethod
    def build(cls, q_max: int, cap: int = DEFAULT_QMAX_CAP) -> "StirlingTable":
        if q_max < 0:
            raise PreconditionError("build_stirling_table requires q_max >= 0")
        if q_max > cap:
            raise CapacityError(
                f"q_max={q_max} exceeds the configured table cap {cap}")
        rows = [[1]]
        for q in range(1, q_max + 1):
            prev = rows[-1]
            row = [0] * (q + 1)
            for j in range(1, q):
                row[j] = j * prev[j] + prev[j - 1]
            row[q] = 1
            rows.append(row)
        return cls(rows)

    def stirling(self, q: int, j: int) -> int:
        if not 0 <= q <= self.q_max:
            raise PreconditionError(f"q={q} outside table range 0..{self.q_max}")
        if not 0 <= j <= q:
            return 0
        return self.rows[q][j]

    def row(self, q: int) -> list[int]:
        if not 0 <= q <= self.q_max:
            raise PreconditionError(f"q={q} outside table range 0..{self.q_max}")
        return list(self.rows[q])

    def row_max(self, q: int) -> int:
        return max(self.row(q))

    def bells(self) -> "BellSequence":
        if self._bells is None:
            values = [sum(r) for r in self.rows]
            maxima = [max(r) for r in self.rows]
            self._bells = BellSequence(values, maxima)
        return self._bells

    def bell(self, q: int) -> int:
        if not 0 <= q <= self.q_max:
            raise PreconditionError(f"q={q} outside table range 0..{self.q_max}")
        return self.bells().values[q]


class BellSequence:
    """Bell numbers values[q] = B_q, with per-row Stirling maxima."""

    MAGIC = b"CBBL"
    VERSION = 1
    _SPOT_CHECKS = {0: 1, 1: 1, 2: 2, 3: 5, 7: 877, 10: 115975}

    def __init__(self, values: list[int], row_maxima: list[int] | None = None):
        self.values = values
        self.row_maxima = row_maxima
        self.q_max = len(values) - 1

    @classmethod
    def stream(cls, q_max: int, cap: int = DEFAULT_QMAX_CAP) -> "BellSequence":
        """Two-row streaming construction; O(q_max) resident big integers."""
        if q_max < 0:
            raise PreconditionError("BellSequence.stream requires q_max >= 0")
        if q_max > cap:
            raise CapacityError(
                f"q_max={q_max} exceeds the configured table cap {cap}")
        values = [1]
        maxima = [1]
        row = [1]
        for q in range(1, q_max + 1):
            new = [0] * (q + 1)
            for j in range(1, q):
                new[j] = j * row[j] + row[j - 1]
            new[q] = 1
            row = new
            values.append(sum(row))
            maxima.append(max(row))
        return cls(values, maxima)

    def bell(self, q: int) -> int:
        if not 0 <= q <= self.q_max:
            raise PreconditionError(f"q={q} outside Bell range 0..{self.q_max}")
        return self.values[q]

    def row_max(self, q: int) -> int:
        if self.row_maxima is None:
            raise PreconditionError("row maxima were not recorded")
        if not 0 <= q <= self.q_max:
            raise PreconditionError(f"q={q} outside Bell range 0..{self.q_max}")
        return self.row_maxima[q]

    # -- binary cache ------------------------------------------------------

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.MAGIC)
            fh.write(struct.pack("<II", self.VERSION, self.q_max))
            for seq in (self.values, self.row_maxima or []):
                fh.write(struct.pack("<I", len(seq)))
                for v in seq:
                    blob = v.to_bytes((v.bit_length() + 7) // 8 or 1, "big")
                    fh.write(struct.pack("<I", len(blob)))
                    fh.write(blob)

    @classmethod
    def load(cls, path) -> "BellSequence":
        with open(path, "rb") as fh:
            if fh.read(4) != cls.MAGIC:
                raise PreconditionError("not a Bell cache file")
            version, q_max = struct.unpack("<II", fh.read(8))
            if version != cls.VERSION:
                raise PreconditionError(f"unsupported Bell cache version {version}")
            seqs = []
            for _ in range(2):
                (count,) = struct.unpack("<I", fh.read(4))
                seq = []
                for _ in range(count):
                    (nbytes,) = struct.unpack("<I", fh.read(4))
                    seq.append(int.from_bytes(fh.read(nbytes), "big"))
                seqs.append(seq)
        values, maxima = seqs
        if len(values) != q_max + 1:
            raise PreconditionError("Bell cache length does not match header")
        for q, expect in cls._SPOT_CHECKS.items():
            if q <= q_max and values[q] != expect:
                raise PreconditionError(f"Bell cache spot check failed at q={q}")
        return cls(values, maxima or None)


def bell_binomial_step(values: list[int], q: int) -> int:
    """B_{q+1} via the identity sum_k C(q, k) * B_k.

    Independent of the Stirling construction; used as a cross-check.
    """
    return sum(math.comb(q, k) * values[k] for k in range(q + 1))


def log2_big(x: int, frac_bits: int = DEFAULT_FRAC_BITS) -> FloatInterval:
    """Alias kept close to the combinatorics it reports on."""
    return log2_interval(x, frac_bits)
