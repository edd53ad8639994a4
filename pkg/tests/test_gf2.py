import pytest

from condbound.errors import PreconditionError
from condbound.gf2 import (clmul, default_modulus, gf_mul, is_irreducible,
                           modulus_table, poly_mod, smallest_irreducible,
                           tables_for)


def test_clmul_basic():
    assert clmul(0b11, 0b11) == 0b101          # (x+1)^2 = x^2+1
    assert clmul(0b10, 0b10) == 0b100
    assert clmul(1, 0b1011) == 0b1011
    assert clmul(0, 123) == 0


def test_poly_mod():
    # x^2 mod (x^2+x+1) = x+1
    assert poly_mod(0b100, 0b111) == 0b11
    assert poly_mod(0b11, 0b111) == 0b11


def test_gf4_multiplication_table():
    mod = default_modulus(2)  # x^2+x+1
    assert mod == 0b111
    # GF(4) with elements {0,1,w,w+1}: w*w = w+1, w*(w+1) = 1
    assert gf_mul(2, 2, mod) == 3
    assert gf_mul(2, 3, mod) == 1
    assert gf_mul(3, 3, mod) == 2


def test_shipped_moduli_are_irreducible():
    table = modulus_table()
    assert sorted(table) == list(range(2, 65))
    for w, mod in table.items():
        assert mod.bit_length() - 1 == w
        assert is_irreducible(mod), w


def test_shipped_moduli_are_smallest():
    for w in [2, 3, 4, 8, 12]:
        assert modulus_table()[w] == smallest_irreducible(w)


def test_classic_degree8_modulus():
    assert modulus_table()[8] == 0x11B


def test_irreducibility_rejects_composites():
    assert not is_irreducible(0b101)      # x^2+1 = (x+1)^2
    assert not is_irreducible(0b1001)     # x^3+1 = (x+1)(x^2+x+1)
    assert not is_irreducible(0b110)      # divisible by x
    assert is_irreducible(0b111)
    assert is_irreducible(0b1011)


def test_width_range():
    with pytest.raises(PreconditionError):
        default_modulus(1)
    with pytest.raises(PreconditionError):
        default_modulus(65)


def test_tables_match_scalar_multiplication():
    import numpy as np
    for w in [2, 3, 8]:
        mod = default_modulus(w)
        t = tables_for(w, mod)
        size = 1 << w
        a = np.repeat(np.arange(size), size)
        b = np.tile(np.arange(size), size)
        got = t.mul_vec(a, b)
        for i in range(0, size * size, max(1, size * size // 257)):
            assert got[i] == gf_mul(int(a[i]), int(b[i]), mod)
        # full check at w=2,3
        if w <= 3:
            for i in range(size * size):
                assert got[i] == gf_mul(int(a[i]), int(b[i]), mod)


def test_generator_order():
    t = tables_for(4, default_modulus(4))
    seen = set()
    v = 1
    for _ in range(15):
        seen.add(v)
        v = gf_mul(v, t.generator, t.modulus)
    assert v == 1
    assert len(seen) == 15
