"""Polynomials over F_p (constant term first) and integer quartic discriminants.

Factorization follows the usual three stages: squarefree split through
gcd(f, f'), distinct-degree split through gcd(g, x^(p^k) - x), and an
equal-degree split. Linear factors are found by exhaustive root search when
p <= 10^4; everything else uses seeded Cantor-Zassenhaus.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

EXHAUSTIVE_ROOT_LIMIT = 10**4
DEFAULT_SEED = 20240601


@dataclass(frozen=True)
class PolyModP:
    p: int
    coeffs: tuple[int, ...]  # constant first, no trailing zeros

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __str__(self) -> str:
        return format_poly(self.coeffs)


@dataclass(frozen=True)
class FactorizationModP:
    p: int
    factors: tuple[tuple[PolyModP, int], ...]

    def shape(self) -> list[tuple[int, int]]:
        """(exponent, degree) pairs."""
        return [(e, g.degree) for g, e in self.factors]

    def expand(self) -> PolyModP:
        acc = [1]
        for g, e in self.factors:
            for _ in range(e):
                acc = _mul(acc, list(g.coeffs), self.p)
        return PolyModP(self.p, tuple(acc))

    def __str__(self) -> str:
        parts = []
        for g, e in self.factors:
            s = f"({g})"
            parts.append(s if e == 1 else f"{s}^{e}")
        return " * ".join(parts) or "1"


def format_poly(coeffs, var: str = "x") -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if k == 0:
            terms.append(f"{c}")
        elif c == 1:
            terms.append(mono)
        elif c == -1:
            terms.append(f"-{mono}")
        else:
            terms.append(f"{c}*{mono}")
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


# -- raw list arithmetic, coefficients in [0, p) ---------------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _add(a, b, p):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _sub(a, b, p):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _divmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] = (a[i + k] - c * y) % p
        _trim(a)
    return _trim(q), a


def _monic(a, p):
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _divmod(a, b, p)[1]
    return _monic(a, p)


def _deriv(a, p):
    return _trim([i * a[i] % p for i in range(1, len(a))])


def _powmod(base, e, mod, p):
    result = [1]
    base = _divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _divmod(_mul(result, base, p), mod, p)[1]
        base = _divmod(_mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


# -- public API -------------------------------------------------------------


def make_poly(coeffs, p: int) -> PolyModP:
    return PolyModP(p, tuple(_trim([c % p for c in coeffs])))


def reduce_mod_p(int_poly, p: int) -> PolyModP:
    """Coefficientwise reduction of a monic integer polynomial."""
    if not int_poly or int_poly[-1] != 1:
        raise ValueError("reduce_mod_p expects a monic polynomial")
    return make_poly(int_poly, p)


def poly_gcd(a: PolyModP, b: PolyModP) -> PolyModP:
    return PolyModP(a.p, tuple(_gcd(a.coeffs, b.coeffs, a.p)))


def poly_mul(a: PolyModP, b: PolyModP) -> PolyModP:
    return PolyModP(a.p, tuple(_mul(a.coeffs, b.coeffs, a.p)))


def poly_divmod(a: PolyModP, b: PolyModP) -> tuple[PolyModP, PolyModP]:
    q, r = _divmod(a.coeffs, b.coeffs, a.p)
    return PolyModP(a.p, tuple(q)), PolyModP(a.p, tuple(r))


def _squarefree_decomposition(f, p):
    """Pairs (g, k): f = prod g^k with each g squarefree and pairwise coprime."""
    out = []
    i = 1
    c = _gcd(f, _deriv(f, p), p)
    w = _divmod(f, c, p)[0]
    while len(w) > 1:
        y = _gcd(w, c, p)
        z = _divmod(w, y, p)[0]
        if len(z) > 1:
            out.append((z, i))
        i += 1
        w, c = y, _divmod(c, y, p)[0]
    if len(c) > 1:
        # c is a p-th power: take the p-th root coefficientwise
        root = [c[k] for k in range(0, len(c), p)]
        out.extend((g, k * p) for g, k in _squarefree_decomposition(root, p))
    return out


def _distinct_degree(f, p):
    out = []
    h = [0, 1]
    k = 0
    f = list(f)
    while len(f) - 1 >= 2 * (k + 1):
        k += 1
        h = _powmod(h, p, f, p)
        g = _gcd(f, _sub(h, [0, 1], p), p)
        if len(g) > 1:
            out.append((g, k))
            f = _divmod(f, g, p)[0]
            h = _divmod(h, f, p)[1]
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _roots_exhaustive(f, p):
    roots = []
    for r in range(p):
        acc = 0
        for c in reversed(f):
            acc = (acc * r + c) % p
        if acc == 0:
            roots.append(r)
    return roots


def _equal_degree(f, d, p, rng):
    n = len(f) - 1
    if n == d:
        return [f]
    if d == 1 and p <= EXHAUSTIVE_ROOT_LIMIT:
        return [[(-r) % p, 1] for r in _roots_exhaustive(f, p)]
    if p == 2:
        raise AssertionError("p = 2 must not reach randomized splitting")
    e = (p**d - 1) // 2
    while True:
        a = _trim([rng.randrange(p) for _ in range(n)])
        if len(a) < 2:
            continue
        g = _gcd(f, a, p)
        if 1 < len(g) < len(f):
            break
        b = _sub(_powmod(a, e, f, p), [1], p)
        g = _gcd(f, b, p)
        if 1 < len(g) < len(f):
            break
    return _equal_degree(g, d, p, rng) + _equal_degree(_divmod(f, g, p)[0], d, p, rng)


def factor_mod_p(f: PolyModP, seed: int = DEFAULT_SEED) -> FactorizationModP:
    """Complete factorization of a monic f into monic irreducibles.

    Factors are sorted by degree, then by coefficient tuple.
    """
    p = f.p
    if not f.is_monic():
        raise ValueError("factor_mod_p expects a monic polynomial")
    rng = random.Random(seed)
    found = []
    for g, k in _squarefree_decomposition(list(f.coeffs), p):
        for h, d in _distinct_degree(g, p):
            for irr in _equal_degree(h, d, p, rng):
                found.append((PolyModP(p, tuple(irr)), k))
    found.sort(key=lambda t: (t[0].degree, t[0].coeffs))
    return FactorizationModP(p, tuple(found))


def has_repeated_factor(fact: FactorizationModP) -> bool:
    return any(e > 1 for _, e in fact.factors)


# -- integer discriminants --------------------------------------------------


def bareiss_det(matrix) -> int:
    """Fraction-free determinant of a square integer matrix."""
    a = [list(row) for row in matrix]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def sylvester_matrix(f, g) -> list[list[int]]:
    """Sylvester matrix of f, g given constant-first coefficient lists."""
    n, m = len(f) - 1, len(g) - 1
    size = n + m
    rows = []
    fr, gr = list(reversed(f)), list(reversed(g))
    for i in range(m):
        rows.append([0] * i + fr + [0] * (size - n - 1 - i))
    for i in range(n):
        rows.append([0] * i + gr + [0] * (size - m - 1 - i))
    return rows


def quartic_discriminant(int_poly) -> int:
    """Discriminant of a monic quartic as the 7x7 Sylvester resultant Res(f, f').

    For monic degree 4 the sign (-1)^(4*3/2) is +1, so disc = Res(f, f').
    """
    if len(int_poly) != 5 or int_poly[-1] != 1:
        raise ValueError("quartic_discriminant expects a monic quartic")
    deriv = [i * int_poly[i] for i in range(1, 5)]
    return bareiss_det(sylvester_matrix(list(int_poly), deriv))


def quartic_discriminant_formula(int_poly) -> int:
    """Same value from the expanded coefficient polynomial; much cheaper."""
    e, d, c, b, a = int_poly
    return (
        256 * a**3 * e**3 - 192 * a**2 * b * d * e**2 - 128 * a**2 * c**2 * e**2
        + 144 * a**2 * c * d**2 * e - 27 * a**2 * d**4 + 144 * a * b**2 * c * e**2
        - 6 * a * b**2 * d**2 * e - 80 * a * b * c**2 * d * e + 18 * a * b * c * d**3
        + 16 * a * c**4 * e - 4 * a * c**3 * d**2 - 27 * b**4 * e**2
        + 18 * b**3 * c * d * e - 4 * b**3 * d**3 - 4 * b**2 * c**3 * e + b**2 * c**2 * d**2
    )
