from fractions import Fraction

import pytest

from condbound import (BallsBinsInstance, moment_norm, moment_sandwich,
                       raw_moment)
from condbound.errors import PreconditionError

from oracles import assignment_moment


def test_first_moment_is_one_when_square(table16):
    for M in [1, 2, 3, 17]:
        inst = BallsBinsInstance(M, M, 4)
        assert raw_moment(inst, 1, table16).value == 1


def test_second_moment_three_brute_force(table16):
    # frozen from the 27-assignment enumeration
    brute = assignment_moment(3, 3, 2)
    assert brute == Fraction(5, 3)
    inst = BallsBinsInstance(3, 3, 2)
    assert raw_moment(inst, 2, table16).value == brute


def test_third_moment_four_brute_force(table16):
    brute = assignment_moment(4, 4, 3)
    assert brute == Fraction(29, 8)
    inst = BallsBinsInstance(4, 4, 3)
    assert raw_moment(inst, 3, table16).value == brute


def test_moment_matches_exhaustive_average_small_grid(table16):
    # full independence is q-wise independent for every q
    for M in range(1, 6):
        for order in range(1, min(M, 4) + 1):
            inst = BallsBinsInstance(M, M, order)
            assert raw_moment(inst, order, table16).value == \
                assignment_moment(M, M, order), (M, order)


def test_general_M_not_N(table16):
    # M=4 balls into N=2 bins, order 2: E S^2 = M/N + S(2,2)*M(M-1)/N^2
    inst = BallsBinsInstance(4, 2, 2)
    assert raw_moment(inst, 2, table16).value == assignment_moment(4, 2, 2)


def test_order_above_independence_rejected(table16):
    inst = BallsBinsInstance(8, 8, 2)
    with pytest.raises(PreconditionError, match="independence"):
        raw_moment(inst, 3, table16)


def test_order_above_table_rejected(table16):
    inst = BallsBinsInstance(8, 8, 64)
    with pytest.raises(PreconditionError, match="table"):
        raw_moment(inst, 32, table16)


def test_log2_value_encloses(table16):
    inst = BallsBinsInstance(3, 3, 2)
    res = raw_moment(inst, 2, table16)
    from condbound.intervals import log2_fraction, log2_interval
    # log2(5/3) = log2 5 - log2 3: independent recombination must overlap
    ref = log2_interval(5) - log2_interval(3)
    assert max(res.log2_value.lo, ref.lo) <= min(res.log2_value.hi, ref.hi)
    assert res.log2_value.width <= Fraction(1, 2 ** 250)


def test_moment_norm_order_one(table16):
    inst = BallsBinsInstance(7, 7, 3)
    iv = moment_norm(inst, 1, table16)
    assert iv.lo == iv.hi == 1


def test_moment_norm_brackets_value(table16):
    inst = BallsBinsInstance(3, 3, 2)
    iv = moment_norm(inst, 2, table16)
    assert iv.lo ** 2 <= Fraction(5, 3) <= iv.hi ** 2
    inst = BallsBinsInstance(256, 256, 4)
    val = raw_moment(inst, 4, table16).value
    iv = moment_norm(inst, 4, table16)
    assert iv.lo ** 4 <= val <= iv.hi ** 4


def test_power_mean_monotonicity(table16):
    # certified direction: norm_a.hi <= norm_b.lo for a < b (strict gaps
    # dwarf the enclosure widths whenever M = N > 1)
    for M in [3, 256]:
        inst = BallsBinsInstance(M, M, 8)
        norms = [moment_norm(inst, k, table16) for k in range(1, 7)]
        for a, b in zip(norms, norms[1:]):
            assert a.certainly_le(b)


def test_sandwich_example(table16):
    lower, upper = moment_sandwich(8, 3, table16)
    assert lower == Fraction(105, 32)
    assert upper == 5
    exact = raw_moment(BallsBinsInstance(8, 8, 3), 3, table16).value
    assert exact == Fraction(137, 32)
    assert lower <= exact <= upper


def test_sandwich_order_one(table16):
    lower, upper = moment_sandwich(5, 1, table16)
    assert lower == upper == 1


def test_sandwich_large_M_linearised(table16):
    M = 2 ** 10
    lower, upper = moment_sandwich(M, 4, table16)
    assert upper == 15
    assert lower >= (1 - Fraction(6, M)) * 15
    # linearised product bound: (1 - sum (i-1)/M) * B <= exact lower
    linear = (1 - Fraction(sum(i - 1 for i in range(1, 5)), M)) * 15
    assert linear <= lower


def test_sandwich_brackets_exact_grid(table16):
    for M in [4, 8, 16, 256, 2 ** 10]:
        for order in range(2, 13):
            lower, upper = moment_sandwich(M, order, table16)
            inst = BallsBinsInstance(M, M, order)
            exact = raw_moment(inst, order, table16).value
            assert lower <= exact <= upper, (M, order)


def test_limit_toward_bell(table16):
    # |E S^order - B_order| <= B_order * order^2 / (2M) for M = N
    for M in [2 ** 10, 2 ** 16]:
        for order in [2, 4, 8]:
            inst = BallsBinsInstance(M, M, order)
            val = raw_moment(inst, order, table16).value
            bell = table16.bell(order)
            assert abs(val - bell) <= Fraction(bell * order ** 2, 2 * M)
