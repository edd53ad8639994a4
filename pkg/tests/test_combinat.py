from fractions import Fraction

import pytest

from condbound import BellSequence, StirlingTable, binomial, falling_factorial
from condbound.errors import CapacityError, PreconditionError

from oracles import (bell_by_binomial_recurrence, enumerate_partitions,
                     partition_counts_by_blocks)


def test_table_qmax_zero():
    t = StirlingTable.build(0)
    assert t.q_max == 0
    assert t.stirling(0, 0) == 1


def test_stirling_examples():
    t = StirlingTable.build(5)
    # brute force: partitions of a 4-set into 2 blocks
    brute = sum(1 for p in enumerate_partitions(range(4)) if len(p) == 2)
    assert brute == 7
    assert t.stirling(4, 2) == 7
    assert t.stirling(5, 5) == 1
    assert t.stirling(3, 0) == 0
    assert t.stirling(2, 5) == 0


def test_stirling_matches_partition_enumeration():
    t = StirlingTable.build(10)
    for q in range(0, 11):
        counts = partition_counts_by_blocks(q)
        for j in range(q + 1):
            assert t.stirling(q, j) == counts[j], (q, j)


def test_capacity_cap():
    with pytest.raises(CapacityError):
        StirlingTable.build(5000)
    with pytest.raises(PreconditionError):
        StirlingTable.build(-1)


def test_bell_examples(table16):
    assert table16.bell(0) == 1
    # enumerate all partitions of a 3-set
    assert sum(1 for _ in enumerate_partitions(range(3))) == 5
    assert table16.bell(3) == 5
    triangle = bell_by_binomial_recurrence(10)
    assert table16.bell(10) == triangle[10] == 115975


def test_bell_out_of_range(table16):
    with pytest.raises(PreconditionError):
        table16.bell(17)


def test_row_sums_equal_bells(table64):
    bells = table64.bells()
    for q in range(65):
        assert sum(table64.rows[q]) == bells.values[q]


def test_binomial_recurrence_independent_identity(table64):
    ref = bell_by_binomial_recurrence(64)
    for q in range(65):
        assert table64.bell(q) == ref[q]


def test_binomial():
    assert binomial(5, 2) == 10
    assert binomial(7, 0) == 1
    assert binomial(3, 7) == 0
    with pytest.raises(PreconditionError):
        binomial(3, -1)


def test_falling_factorial():
    assert falling_factorial(4, 3) == 24
    assert falling_factorial(9, 1) == 9
    assert falling_factorial(4, 0) == 1
    assert falling_factorial(3, 7) == 0
    with pytest.raises(PreconditionError):
        falling_factorial(4, -2)


def test_streaming_matches_table(table64):
    stream = BellSequence.stream(64)
    assert stream.values == table64.bells().values
    assert stream.row_maxima == [max(r) for r in table64.rows]


def test_bell_cache_roundtrip(tmp_path):
    bells = BellSequence.stream(40)
    path = tmp_path / "bells.bin"
    bells.save(path)
    loaded = BellSequence.load(path)
    assert loaded.values == bells.values
    assert loaded.row_maxima == bells.row_maxima


def test_bell_cache_integrity(tmp_path):
    bells = BellSequence.stream(12)
    path = tmp_path / "bells.bin"
    bells.save(path)
    blob = bytearray(path.read_bytes())
    blob[20] ^= 0xFF  # first Bell value byte (after magic/header/lengths)
    path.write_bytes(bytes(blob))
    with pytest.raises(PreconditionError):
        BellSequence.load(path)
