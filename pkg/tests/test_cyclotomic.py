from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from abelprob.cyclotomic import (
    Cyclotomic,
    RootOfUnity,
    cyclotomic_polynomial,
    ring_from_values,
    ring_is_zero,
    ring_mul,
    ring_to_values,
    scatter_sum,
    simplify,
    totient,
)


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)
    assert [totient(m) for m in (1, 2, 5, 8, 9, 12)] == [1, 1, 4, 4, 6, 4]


def test_sum_of_roots_vanishes():
    for m in (2, 3, 4, 5, 6, 8, 12):
        total = sum((Cyclotomic.zeta(m, e) for e in range(m)), Cyclotomic.rational(0))
        assert total == 0


def test_mixed_conductors():
    i = Cyclotomic.zeta(4)
    w = Cyclotomic.zeta(3)
    assert i * i == -1
    assert w**3 == 1
    z12 = i * w
    assert z12.m == 12
    assert z12**12 == 1 and z12**6 != 1 and z12**4 != 1
    assert Cyclotomic.zeta(8) ** 2 == i


def test_real_part_and_sign():
    z = Cyclotomic.zeta(5)
    c = (z + z.conj()) / 2  # cos(2 pi / 5)
    assert c.is_real()
    assert c.sign() == 1
    assert (c - Fraction(309, 1000)).sign() == 1
    assert (c - Fraction(31, 100)).sign() == -1
    assert abs(float(c) - float(mpmath.cos(2 * mpmath.pi / 5))) < 1e-15
    assert (2 + z + z.conj()).sign() == 1


def test_inverse_and_norm():
    z = Cyclotomic.zeta(7)
    a = 3 + z - 2 * z**3
    assert a * a.inverse() == 1
    assert Cyclotomic.zeta(5).norm() == 1


def test_simplify_returns_fraction_when_rational():
    z = Cyclotomic.zeta(6)
    v = simplify(z + z.conj())
    assert isinstance(v, Fraction) and v == 1


def test_root_of_unity():
    a = RootOfUnity(1, 4)
    assert a * a == RootOfUnity(1, 2)
    assert (a**4).is_one()
    assert a.conj() == RootOfUnity(3, 4)
    assert a == Cyclotomic.zeta(4)
    assert len({RootOfUnity(2, 4), RootOfUnity(1, 2)}) == 1


def test_ring_roundtrip_and_zero_test():
    z = Cyclotomic.zeta(5)
    vals = [Fraction(1, 3), (2 + z + z.conj()) / 10, Fraction(0), z**2]
    arr, den = ring_from_values(vals, 5)
    assert ring_to_values(arr, den, 5) == vals
    # 1 + z + ... + z^4 is zero in the ring quotient
    assert ring_is_zero(np.ones((1, 5), dtype=np.int64), 5)[0]


def test_scatter_sum_object_dtype():
    vals = np.array([[10**30], [1], [2]], dtype=object)
    out = scatter_sum(np.array([1, 0, 1]), vals, 3)
    assert out[1, 0] == 10**30 + 2 and out[0, 0] == 1 and out[2, 0] == 0


@given(st.lists(st.integers(-5, 5), min_size=8, max_size=8), st.lists(st.integers(-5, 5), min_size=8, max_size=8))
def test_ring_mul_matches_scalar_product(a, b):
    A = Cyclotomic.from_ring(8, a)
    B = Cyclotomic.from_ring(8, b)
    prod = ring_mul(np.array([a]), np.array([b]), 8)
    assert Cyclotomic.from_ring(8, prod[0]) == A * B


@given(st.lists(st.integers(-6, 6), min_size=12, max_size=12))
def test_float_view_matches_mpmath(vec):
    a = Cyclotomic.from_ring(12, vec)
    ref = mpmath.fsum(c * mpmath.exp(2j * mpmath.pi * t / 12) for t, c in enumerate(vec))
    assert abs(complex(a) - complex(ref)) < 1e-9


@given(st.lists(st.integers(-4, 4), min_size=5, max_size=5))
def test_sign_of_real_values_matches_float(vec):
    a = Cyclotomic.from_ring(5, vec)
    r = a + a.conj()
    f = float(r)
    if abs(f) > 1e-9:
        assert r.sign() == (1 if f > 0 else -1)
    if r == 0:
        assert r.sign() == 0


def test_unhashable():
    with pytest.raises(TypeError):
        hash(Cyclotomic.zeta(3))


def test_sign_resolves_values_below_double_precision():
    z = Cyclotomic.zeta(5)
    c = (z + z.conj()) / 2
    with mpmath.workdps(60):
        below = Fraction(int(mpmath.floor((mpmath.sqrt(5) - 1) / 4 * 10**30)), 10**30)
    assert (c - below).sign() == 1
    assert (c - (below + Fraction(1, 10**30))).sign() == -1
