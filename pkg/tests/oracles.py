"""Independent oracles used to freeze expected values.

Nothing in this module touches the production code paths it is used to
check: set partitions are enumerated one by one, assignment averages come
from explicit enumeration over all N^M assignments, and Bell numbers are
rebuilt through the binomial recurrence.
"""

from fractions import Fraction

import numpy as np


def partition_counts_by_blocks(n: int) -> list[int]:
    """counts[j] = number of partitions of an n-set into j blocks, by
    explicit enumeration of restricted growth strings."""
    if n == 0:
        return [1]
    a = [0] * n
    m = [0] * n  # m[i] = max(a[0..i])
    counts = [0] * (n + 1)
    while True:
        counts[m[-1] + 1] += 1
        i = n - 1
        while i > 0 and a[i] == m[i - 1] + 1:
            i -= 1
        if i == 0:
            return counts
        a[i] += 1
        if a[i] > m[i - 1]:
            m[i] = a[i]
        else:
            m[i] = m[i - 1]
        for j in range(i + 1, n):
            a[j] = 0
            m[j] = m[i]


def enumerate_partitions(items):
    """Yield every partition of ``items`` as a list of blocks."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in enumerate_partitions(rest):
        for i in range(len(sub)):
            yield sub[:i] + [[first] + sub[i]] + sub[i + 1:]
        yield [[first]] + sub


def bell_by_binomial_recurrence(n: int) -> list[int]:
    """B_0..B_n via B_{q+1} = sum_k C(q, k) B_k only."""
    import math
    values = [1]
    for q in range(n):
        values.append(sum(math.comb(q, k) * values[k] for k in range(q + 1)))
    return values


def assignment_bin0_histogram(M: int, N: int) -> list[int]:
    """hist[s] = number of assignments of M balls to N bins (all N^M of
    them) in which bin 0 holds exactly s balls."""
    total = N ** M
    hist = np.zeros(M + 1, dtype=np.int64)
    chunk = 1 << 22
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        zeros = np.zeros(len(idx), dtype=np.int64)
        div = np.ones(len(idx), dtype=np.int64)
        for _ in range(M):
            zeros += (idx // div) % N == 0
            div *= N
        hist += np.bincount(zeros, minlength=M + 1)
    return [int(c) for c in hist]


def assignment_moment(M: int, N: int, order: int) -> Fraction:
    """Average of (bin-0 load)^order over all N^M assignments, exactly."""
    hist = assignment_bin0_histogram(M, N)
    total = N ** M
    return sum((Fraction(c, total) * s ** order for s, c in enumerate(hist)),
               Fraction(0))


def load_distribution_moment(support: dict, order: int) -> Fraction:
    return sum((p * s ** order for s, p in support.items()), Fraction(0))
