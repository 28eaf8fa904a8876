"""Exact integer utilities: valuations, squarefree certification, Euler products."""

from __future__ import annotations

import bisect
import math
from decimal import Decimal, localcontext
from typing import NamedTuple

from . import kernels
from .errors import CapacityExceeded, ZeroInput

#: Largest prime the squarefree certifier may trial-divide by.
DEFAULT_TRIAL_BOUND = 10**7

PrimeFactorList = list[tuple[int, int]]

_prime_cache: list[int] = []
_prime_cache_limit = 1


def primes_up_to(n: int) -> list[int]:
    """Primes <= n, served from a cache that only ever grows."""
    global _prime_cache, _prime_cache_limit
    if n > _prime_cache_limit:
        _prime_cache = kernels.sieve_primes(max(n, 2 * _prime_cache_limit, 1000))
        _prime_cache_limit = max(n, 2 * _prime_cache_limit, 1000)
    return _prime_cache[: bisect.bisect_right(_prime_cache, n)]


def two_adic_valuation(n: int) -> int:
    if n == 0:
        raise ZeroInput("2-adic valuation of 0 is undefined")
    return (n & -n).bit_length() - 1


def odd_part(n: int) -> int:
    if n == 0:
        raise ZeroInput("odd part of 0 is undefined")
    return n >> two_adic_valuation(n)


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def icbrt(n: int) -> int:
    """Floor of the real cube root of n >= 0."""
    if n < 0:
        raise ValueError("icbrt expects n >= 0")
    r = int(round(n ** (1.0 / 3.0))) if n < 2**1000 else 1 << ((n.bit_length() + 2) // 3)
    while r * r * r > n:
        r -= 1
    while (r + 1) ** 3 <= n:
        r += 1
    return r


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_squarefree(n: int, bound: int = DEFAULT_TRIAL_BOUND) -> bool:
    """True iff no prime square divides n.

    Trial division runs up to the cube root of n; what survives has at most
    two prime factors, so it is squarefree unless it is a perfect square.
    Needs primes up to cbrt(n), which must not exceed ``bound``.
    """
    if n < 1:
        raise ValueError("is_squarefree expects n >= 1")
    limit = icbrt(n)
    if limit > bound:
        raise CapacityExceeded(f"certifying {n} needs primes up to {limit} > bound {bound}")
    rest = kernels.strip_primes(n, primes_up_to(limit))
    if rest == 0:
        return False
    return rest == 1 or not is_perfect_square(rest)


def factorize(n: int, bound: int = DEFAULT_TRIAL_BOUND) -> PrimeFactorList:
    """Complete factorization of n >= 1 by trial division up to sqrt(n)."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    limit = math.isqrt(n)
    out: PrimeFactorList = []
    for p in primes_up_to(min(limit, bound)):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    if n > 1:
        if math.isqrt(n) > bound and not is_prime(n):
            raise CapacityExceeded(f"cofactor {n} cannot be certified with bound {bound}")
        out.append((n, 1))
    return out


def sqrt_minus16_mod_p2(p: int) -> tuple[int, int] | None:
    """The two roots of x^2 = -16 mod p^2 for an odd prime p, or None.

    Roots exist exactly when p = 1 mod 4.
    """
    if p % 4 != 1:
        return None
    # i = sqrt(-1) mod p from any quadratic nonresidue
    a = 2
    while pow(a, (p - 1) // 2, p) != p - 1:
        a += 1
    x = 4 * pow(a, (p - 1) // 4, p) % p
    q = p * p
    x = (x - (x * x + 16) * pow(2 * x, -1, q)) % q
    return (x, q - x) if x < q - x else (q - x, x)


class EulerProduct(NamedTuple):
    value: float
    tail_bound: float


def euler_product_p1mod4(truncation_bound: int) -> EulerProduct:
    """Product of (1 - 2/p^2) over primes p = 1 mod 4 up to the bound.

    ``tail_bound`` = 4/B bounds the relative error against the full product
    (the tail's -log is below sum_{n>B} 2/(n^2 - 2) < 4/B).
    """
    if truncation_bound < 1:
        raise ValueError("truncation_bound must be positive")
    with localcontext() as ctx:
        ctx.prec = 40
        acc = Decimal(1)
        two = Decimal(2)
        for p in primes_up_to(truncation_bound):
            if p % 4 == 1:
                acc *= 1 - two / (p * p)
        value = float(acc)
    return EulerProduct(value, 4.0 / truncation_bound)


def mobius(n: int) -> int:
    mu = 1
    for _, e in factorize(n):
        if e > 1:
            return 0
        mu = -mu
    return mu


def count_monic_irreducibles(p: int, d: int) -> int:
    """Number of monic irreducible polynomials of degree d over F_p."""
    if d < 1:
        raise ValueError("degree must be positive")
    total = sum(mobius(e) * p ** (d // e) for e in range(1, d + 1) if d % e == 0)
    return total // d
