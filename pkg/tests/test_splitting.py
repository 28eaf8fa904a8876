import dataclasses

import pytest

from simplest_quartic.core_arith import primes_up_to
from simplest_quartic.errors import BadShape, VerificationFailed
from simplest_quartic.quartic_field import AlgebraicNumber
from simplest_quartic.splitting import (
    IdealFactorization,
    factor_odd_prime,
    factor_two,
    field_index_via_splitting,
    is_common_index_divisor,
    oracle_factor_two,
    two_generators,
    verify_factorization,
)
from simplest_quartic.verification import valid_ms


def _coords(a):
    return a.coeffs, a.den


def test_factor_two_m1():
    fact = factor_two(1)
    assert [_coords(pf.generator) for pf in fact.factors] == [((1, -5, -1, 1), 1), ((0, 5, 1, -1), 1)]
    assert fact.shape() == [(1, 2), (1, 2)]
    assert verify_factorization(fact).passed


def test_factor_two_m4_totally_ramified():
    fact = factor_two(4)
    assert fact.shape() == [(4, 1)]
    assert verify_factorization(fact).passed


def test_factor_two_m16_shape_claim():
    fact = factor_two(16)
    assert [pf.e for pf in fact.factors] == [2, 2]
    assert oracle_factor_two(16).shape() == [(2, 1), (2, 1)]


@pytest.mark.parametrize("m", [2, 6, 10, 14])
def test_factor_two_v2_equals_one(m):
    fact = factor_two(m)
    assert fact.shape() == [(2, 2)]
    assert verify_factorization(fact).passed


def test_oracle_matches_closed_form_shapes():
    for m in valid_ms(300):
        assert oracle_factor_two(m).shape() == factor_two(m).shape()


def test_odd_prime_examples():
    f17 = factor_odd_prime(1, 17)
    assert any(pf.e >= 2 for pf in f17.factors)
    assert f17.degree() == 4
    f5 = factor_odd_prime(1, 5)
    assert f5.degree() == 4 and all(pf.e == 1 for pf in f5.factors)
    for p in (5, 13, 17):
        assert verify_factorization(factor_odd_prime(1, p)).passed


def test_lift_coefficients_in_range():
    for p in (3, 5, 13, 17, 29):
        for pf in factor_odd_prime(10, p).factors:
            assert pf.generator.den == 1 and all(0 <= c < p for c in pf.generator.coeffs)


def test_factor_odd_prime_rejects_two():
    with pytest.raises(ValueError):
        factor_odd_prime(1, 2)
    with pytest.raises(ValueError):
        factor_odd_prime(1, 9)


def test_ramification_pattern():
    for m in valid_ms(120):
        M = m * m + 16
        for p in primes_up_to(200)[1:]:
            fact = factor_odd_prime(m, p)
            assert fact.degree() == 4
            ramified = any(pf.e >= 2 for pf in fact.factors)
            assert ramified == (M % p == 0)
            if ramified:
                assert p % 4 == 1


def _corrupt(fact, k=0, delta=1):
    pf = fact.factors[k]
    g = pf.generator
    coeffs = list(g.coeffs)
    coeffs[1] += delta * g.den
    bad = dataclasses.replace(pf, generator=AlgebraicNumber(g.m, tuple(coeffs), g.den))
    factors = list(fact.factors)
    factors[k] = bad
    return IdealFactorization(fact.m, fact.p, tuple(factors), fact.source)


@pytest.mark.parametrize("m, p", [(1, 2), (4, 2), (2, 2), (1, 13), (1, 17)])
def test_corrupted_generator_fails(m, p):
    fact = factor_two(m) if p == 2 else factor_odd_prime(m, p)
    with pytest.raises(VerificationFailed) as info:
        verify_factorization(_corrupt(fact))
    assert info.value.certificate is not None
    assert not info.value.certificate.passed


def test_non_strict_returns_certificate():
    cert = verify_factorization(_corrupt(factor_two(1)), strict=False)
    assert not cert.passed and cert.first_failure


def test_v2_three_generator_is_not_integral():
    # kept verbatim; the numerator is divisible by 4 but not by 16
    for m in (8, 24, 40):
        (gen, e), = two_generators(m)
        assert not gen.is_algebraic_integer()
        assert (gen * 4).is_algebraic_integer()


@pytest.mark.parametrize(
    "p, shape, expected",
    [(2, [(1, 2), (1, 2)], True), (2, [(4, 1)], False), (3, [(1, 2), (1, 2)], False),
     (2, [(1, 1), (1, 1), (2, 1)], True), (2, [(1, 1), (1, 1), (1, 2)], False),
     (3, [(1, 1)] * 4, True), (5, [(1, 1)] * 4, False)],
)
def test_common_index_divisor(p, shape, expected):
    assert is_common_index_divisor(p, shape) is expected


@pytest.mark.parametrize("shape", [[], [(1, 1)], [(0, 4)], [(1, 2), (1, 1)]])
def test_bad_shape(shape):
    with pytest.raises(BadShape):
        is_common_index_divisor(2, shape)


@pytest.mark.parametrize("m, i", [(1, 2), (2, 1), (12, 1), (5, 2), (16, 1), (8, 1)])
def test_field_index_via_splitting(m, i):
    assert field_index_via_splitting(m) == i
