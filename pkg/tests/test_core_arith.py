import math
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simplest_quartic.core_arith import (
    count_monic_irreducibles,
    euler_product_p1mod4,
    factorize,
    icbrt,
    is_perfect_square,
    is_prime,
    is_squarefree,
    mobius,
    odd_part,
    primes_up_to,
    sqrt_minus16_mod_p2,
    two_adic_valuation,
)
from simplest_quartic.errors import CapacityExceeded, ZeroInput


@pytest.mark.parametrize("n, v", [(1, 0), (8, 3), (48, 4), (-12, 2)])
def test_two_adic_valuation(n, v):
    assert two_adic_valuation(n) == v


@pytest.mark.parametrize("n, o", [(20, 5), (32, 1), (17, 17)])
def test_odd_part(n, o):
    assert odd_part(n) == o


def test_zero_input():
    with pytest.raises(ZeroInput):
        two_adic_valuation(0)
    with pytest.raises(ZeroInput):
        odd_part(0)


@given(st.integers(min_value=-10**30, max_value=10**30).filter(bool))
def test_valuation_odd_part_decomposition(n):
    o = odd_part(n)
    assert o % 2 != 0
    assert n == 2 ** two_adic_valuation(n) * o


@pytest.mark.parametrize("n, expected", [(5, True), (25, False), (odd_part(3**2 + 16), False), (1, True)])
def test_is_squarefree_examples(n, expected):
    assert is_squarefree(n) is expected


def test_is_squarefree_brute_force_to_1e6():
    limit = 10**6
    brute = bytearray([1]) * (limit + 1)
    for k in range(2, math.isqrt(limit) + 1):
        brute[k * k :: k * k] = bytes(len(range(k * k, limit + 1, k * k)))
    mismatches = [n for n in range(1, limit + 1) if is_squarefree(n) != bool(brute[n])]
    assert mismatches == []


def test_is_squarefree_capacity():
    assert is_squarefree(10**12 + 39, bound=10**4)  # cbrt ~ 10^4 fits
    with pytest.raises(CapacityExceeded):
        is_squarefree(10**15, bound=10**3)


def test_is_squarefree_large_square_cofactor():
    p = 1_000_003
    assert not is_squarefree(p * p * 7)
    assert is_squarefree(p * 1_000_033)


@pytest.mark.parametrize("n, expected", [(25, True), (16, True), (17, False), (0, True), (10**40, True)])
def test_is_perfect_square(n, expected):
    assert is_perfect_square(n) is expected


@given(st.integers(min_value=0, max_value=10**40))
def test_icbrt(n):
    r = icbrt(n)
    assert r**3 <= n < (r + 1) ** 3


def test_is_prime_matches_sieve():
    ps = set(primes_up_to(20000))
    assert all(is_prime(n) == (n in ps) for n in range(20001))
    assert is_prime(2**61 - 1) and not is_prime(2**61 + 1)


@given(st.integers(min_value=1, max_value=10**12))
@settings(max_examples=200)
def test_factorize_roundtrip(n):
    fac = factorize(n)
    assert math.prod(p**e for p, e in fac) == n
    assert [p for p, _ in fac] == sorted({p for p, _ in fac})
    assert all(is_prime(p) and e >= 1 for p, e in fac)


def test_sqrt_minus16():
    for p in primes_up_to(2000):
        roots = sqrt_minus16_mod_p2(p)
        if p % 4 != 1:
            assert roots is None
            continue
        q = p * p
        assert len(roots) == 2
        assert all((r * r + 16) % q == 0 for r in roots)
        assert sum(roots) == q


def test_euler_product_examples():
    assert euler_product_p1mod4(4).value == 1.0
    assert euler_product_p1mod4(5).value == pytest.approx(0.92, abs=1e-15)
    assert euler_product_p1mod4(13).value == pytest.approx(0.92 * (1 - 2 / 169), abs=1e-15)


def test_euler_product_reference_value():
    # independent float product over a separate prime filter
    ref = 1.0
    for p in range(5, 10**6 + 1, 4):
        if is_prime(p):
            ref *= 1 - 2 / (p * p)
    got = euler_product_p1mod4(10**6)
    assert got.value == pytest.approx(ref, rel=1e-12)
    assert got.tail_bound == pytest.approx(4e-6)


def test_euler_product_monotone_and_bounded():
    prev = 1.0
    for b in [5, 13, 50, 100, 1000, 10**4, 10**5]:
        val, tail = euler_product_p1mod4(b)
        assert 0 < val <= prev
        far = euler_product_p1mod4(10**6).value
        assert val * (1 - tail) <= far <= val
        prev = val


@pytest.mark.parametrize("p, d, n", [(2, 2, 1), (2, 1, 2), (3, 2, 3), (2, 4, 3), (5, 3, 40)])
def test_count_monic_irreducibles_examples(p, d, n):
    assert count_monic_irreducibles(p, d) == n


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_necklace_identity(p):
    for big_d in range(1, 5):
        total = sum(d * count_monic_irreducibles(p, d) for d in range(1, big_d + 1) if big_d % d == 0)
        assert total == p**big_d
        assert count_monic_irreducibles(p, big_d) * big_d <= p**big_d


@pytest.mark.parametrize("p", [2, 3, 5])
def test_irreducible_counts_by_enumeration(p):
    # irreducible iff not a product of two monic polys of lower degree
    def mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
        return tuple(out)

    monic = {d: [tuple(c) + (1,) for c in product(range(p), repeat=d)] for d in range(1, 4)}
    for d in range(1, 4):
        reducible = {mul(a, b) for k in range(1, d) for a in monic[k] for b in monic[d - k]}
        assert len(monic[d]) - len(reducible) == count_monic_irreducibles(p, d)


def test_mobius():
    assert [mobius(n) for n in range(1, 13)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]
