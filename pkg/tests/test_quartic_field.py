import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simplest_quartic.errors import ExcludedM, MixedFields, NotSquarefree
from simplest_quartic.quartic_field import (
    AlgebraicNumber,
    build,
    build_fast,
    field_discriminant,
    field_index,
    sqrt_M_element,
    theta_index,
    validate_m,
)

coeff = st.integers(-40, 40)
small_m = st.sampled_from([1, 2, 4, 5, 6, 8, 16, 17, 100])


@st.composite
def numbers(draw, m=None):
    m = m if m is not None else draw(small_m)
    return AlgebraicNumber(m, tuple(draw(coeff) for _ in range(4)), draw(st.integers(1, 6)))


def _naive_mul(a, b, m):
    # polynomial product then reduction via x^4 = m x^3 + 6 x^2 - m x - 1
    prod = [Fraction(0)] * 7
    for i, x in enumerate(a.fractions()):
        for j, y in enumerate(b.fractions()):
            prod[i + j] += x * y
    for k in range(6, 3, -1):
        c = prod[k]
        prod[k] = 0
        prod[k - 1] += m * c
        prod[k - 2] += 6 * c
        prod[k - 3] -= m * c
        prod[k - 4] -= c
    return prod[:4]


def test_build_m1():
    fp = build(1)
    assert (fp.M, fp.v2m, fp.theta_index, fp.field_index, fp.poly_disc, fp.field_disc) == (
        17, 0, 2, 2, 19652, 4913)


def test_build_excluded_and_nonsquarefree():
    with pytest.raises(ExcludedM):
        build(3)
    for bad in (0, -5):
        with pytest.raises(ExcludedM):
            build(bad)
    with pytest.raises(NotSquarefree):
        build(22)
    assert build(12).M_odd == 5
    assert build(7).M == 65


@pytest.mark.parametrize("m, t", [(1, 2), (2, 4), (4, 8), (16, 16), (8, 16), (48, 16)])
def test_theta_index(m, t):
    assert theta_index(m) == t


@pytest.mark.parametrize("m, i", [(1, 2), (2, 1), (5, 2), (12, 1)])
def test_field_index(m, i):
    assert field_index(m) == i


@pytest.mark.parametrize("m, d", [(1, 4913), (2, 2000), (4, 2048)])
def test_field_discriminant(m, d):
    assert field_discriminant(m) == d


def test_invariants_over_range():
    for m in range(1, 2001):
        try:
            validate_m(m)
        except (ExcludedM, NotSquarefree):
            continue
        fp = build(m)
        assert fp.poly_disc == fp.theta_index**2 * fp.field_disc
        assert fp.theta_index in (2, 4, 8, 16)
        assert fp.field_index in (1, 2) and fp.theta_index % fp.field_index == 0
        assert build_fast(m) == fp


def test_sqrt_M_examples():
    r1 = sqrt_M_element(1)
    assert r1.coeffs == (1, -10, -2, 2) and r1.den == 1
    assert (r1 * r1) == AlgebraicNumber.from_int(1, 17)
    r2 = sqrt_M_element(2)
    assert r2.coeffs == (2, -10, -4, 2)
    assert (r2 * r2) == AlgebraicNumber.from_int(2, 20)


def test_sqrt_M_random():
    rng = random.Random(1)
    for _ in range(1000):
        m = rng.randint(1, 10**7)
        r = sqrt_M_element(m)
        assert r * r == AlgebraicNumber.from_int(m, m * m + 16)


def test_mul_examples():
    m = 9
    th = AlgebraicNumber.theta(m)
    assert th * th**3 == AlgebraicNumber(m, (-1, -m, 6, m))
    inv = AlgebraicNumber(m, (-m, 6, m, -1))
    assert th * inv == AlgebraicNumber.from_int(m, 1)
    a = AlgebraicNumber(m, (3, 1, 4, 1), 5)
    assert a * 1 == a and a * AlgebraicNumber.from_int(m, 1) == a


def test_mixed_fields():
    with pytest.raises(MixedFields):
        AlgebraicNumber.theta(1) * AlgebraicNumber.theta(2)


@given(st.data())
@settings(max_examples=150)
def test_mul_ring_laws(data):
    m = data.draw(small_m)
    a, b, c = (data.draw(numbers(m)) for _ in range(3))
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a * b).fractions() == _naive_mul(a, b, m)


@given(numbers())
def test_normalization(a):
    from math import gcd

    assert a.den >= 1
    assert gcd(gcd(*a.coeffs), gcd(a.coeffs[0], a.den)) in (1,) or a.is_zero()
    assert AlgebraicNumber(a.m, tuple(3 * c for c in a.coeffs), 3 * a.den) == a


def test_charpoly_of_theta_and_integrality():
    m = 6
    th = AlgebraicNumber.theta(m)
    assert th.charpoly() == [1, m, -6, -m, 1]
    assert th.is_algebraic_integer()
    assert not (th / 2).is_algebraic_integer()
    half = (1 + sqrt_M_element(1)) / 2
    assert half.is_algebraic_integer()
