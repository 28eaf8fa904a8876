"""The simplest quartic fields K_m = Q(theta), theta a root of
x^4 - m x^3 - 6 x^2 + m x + 1.

Elements live on the power basis 1, theta, theta^2, theta^3; reduction uses
theta^4 = m theta^3 + 6 theta^2 - m theta - 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .core_arith import (
    DEFAULT_TRIAL_BOUND,
    is_perfect_square,
    is_squarefree,
    odd_part,
    two_adic_valuation,
)
from .errors import ExcludedM, InternalInconsistency, MixedFields, NotSquarefree
from .finite_field_poly import (
    format_poly,
    quartic_discriminant,
    quartic_discriminant_formula,
)

ENGSTROM_INDICES = (1, 2, 3, 4, 6, 12)


def defining_poly(m: int) -> list[int]:
    """Coefficients of P_m, constant term first."""
    return [1, m, -6, -m, 1]


@dataclass(frozen=True, init=False)
class AlgebraicNumber:
    """(c0 + c1 t + c2 t^2 + c3 t^3) / den in K_m, kept in lowest terms."""

    m: int
    coeffs: tuple[int, int, int, int]
    den: int

    def __init__(self, m: int, coeffs, den: int = 1):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != 4:
            raise ValueError("need exactly four power-basis coordinates")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            coeffs, den = tuple(-c for c in coeffs), -den
        g = math.gcd(den, *coeffs)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "coeffs", tuple(c // g for c in coeffs))
        object.__setattr__(self, "den", den // g)

    @classmethod
    def from_int(cls, m: int, n: int) -> "AlgebraicNumber":
        return cls(m, (n, 0, 0, 0))

    @classmethod
    def theta(cls, m: int) -> "AlgebraicNumber":
        return cls(m, (0, 1, 0, 0))

    @classmethod
    def from_fractions(cls, m: int, fracs) -> "AlgebraicNumber":
        fracs = [Fraction(f) for f in fracs]
        den = math.lcm(*(f.denominator for f in fracs))
        return cls(m, [f.numerator * (den // f.denominator) for f in fracs], den)

    @classmethod
    def from_poly(cls, m: int, coeffs, den: int = 1) -> "AlgebraicNumber":
        """Evaluate an integer polynomial (constant first) at theta."""
        return cls(m, _reduce(list(coeffs), m), den)

    def fractions(self) -> list[Fraction]:
        return [Fraction(c, self.den) for c in self.coeffs]

    def _check(self, other: "AlgebraicNumber") -> None:
        if self.m != other.m:
            raise MixedFields(f"elements of K_{self.m} and K_{other.m} cannot be combined")

    def __add__(self, other):
        if isinstance(other, int):
            other = AlgebraicNumber.from_int(self.m, other)
        self._check(other)
        d = self.den * other.den
        return AlgebraicNumber(
            self.m, [a * other.den + b * self.den for a, b in zip(self.coeffs, other.coeffs)], d
        )

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(self.m, [-c for c in self.coeffs], self.den)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return AlgebraicNumber(
                self.m, [c * other.numerator for c in self.coeffs], self.den * other.denominator
            )
        self._check(other)
        prod = [0] * 7
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    prod[i + j] += a * b
        return AlgebraicNumber(self.m, _reduce(prod, self.m), self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, n):
        if not isinstance(n, int):
            raise TypeError("only division by integers is supported")
        return AlgebraicNumber(self.m, self.coeffs, self.den * n)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = AlgebraicNumber.from_int(self.m, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def in_power_basis_order(self) -> bool:
        """True iff the element lies in Z[theta]."""
        return self.den == 1

    def multiplication_matrix(self) -> list[list[Fraction]]:
        """Rows: coordinates of self * theta^k, k = 0..3."""
        rows = []
        t = AlgebraicNumber.theta(self.m)
        cur = self
        for _ in range(4):
            rows.append(cur.fractions())
            cur = cur * t
        return rows

    def charpoly(self) -> list[Fraction]:
        """Characteristic polynomial over Q, constant first, monic.

        Faddeev-LeVerrier on the integer matrix of den * self; the divisions
        by k are exact there.
        """
        num = AlgebraicNumber(self.m, self.coeffs)
        a, t = [], num
        theta = AlgebraicNumber.theta(self.m)
        for _ in range(4):
            a.append(list(t.coeffs))
            t = t * theta
        n = 4
        ints = [0] * n + [1]
        mk = [[int(i == j) for j in range(n)] for i in range(n)]
        for k in range(1, n + 1):
            am = [[sum(a[i][s] * mk[s][j] for s in range(n)) for j in range(n)] for i in range(n)]
            c, r = divmod(-sum(am[i][i] for i in range(n)), k)
            assert r == 0
            ints[n - k] = c
            mk = [[am[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
        return [Fraction(ints[n - k], self.den**k) for k in range(n, -1, -1)]

    def is_algebraic_integer(self) -> bool:
        return all(c.denominator == 1 for c in self.charpoly())

    def __str__(self) -> str:
        body = format_poly(self.coeffs, "t")
        return body if self.den == 1 else f"({body})/{self.den}"


def _reduce(prod: list[int], m: int) -> list[int]:
    """Reduce an integer polynomial in theta to degree <= 3."""
    prod = list(prod) + [0] * max(0, 4 - len(prod))
    for k in range(len(prod) - 1, 3, -1):
        c = prod[k]
        if c:
            prod[k] = 0
            prod[k - 1] += m * c
            prod[k - 2] += 6 * c
            prod[k - 3] -= m * c
            prod[k - 4] -= c
    return prod[:4]


@dataclass(frozen=True)
class FieldParams:
    m: int
    M: int
    v2m: int
    M_odd: int
    poly_disc: int
    theta_index: int
    field_index: int
    field_disc: int

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def validate_m(m: int, bound: int = DEFAULT_TRIAL_BOUND) -> None:
    """Raise unless m parametrizes a field of the family."""
    if m <= 0:
        raise ExcludedM(f"m={m} excluded: m must be a positive integer")
    M = m * m + 16
    if is_perfect_square(M):
        raise ExcludedM(f"m={m} excluded: m^2+16 is a perfect square")
    if not is_squarefree(odd_part(M), bound):
        raise NotSquarefree(f"m={m} excluded: odd part of m^2+16 = {odd_part(M)} is not squarefree")


def theta_index_for_valuation(v2m: int) -> int:
    return 2 ** (min(v2m, 3) + 1)


def theta_index(m: int) -> int:
    """Index of Z[theta] in the ring of integers: 2, 4, 8, 16 by v_2(m)."""
    validate_m(m)
    return theta_index_for_valuation(two_adic_valuation(m))


def field_index(m: int) -> int:
    """Common index divisor I(K_m): 2 for odd m, 1 for even m."""
    validate_m(m)
    return 2 if m % 2 else 1


def assemble(m: int, poly_disc: int) -> FieldParams:
    """FieldParams from an already validated m and its polynomial discriminant."""
    M = m * m + 16
    v2m = two_adic_valuation(m)
    ti = theta_index_for_valuation(v2m)
    D, r = divmod(poly_disc, ti * ti)
    if r:
        raise InternalInconsistency(
            f"m={m}: disc(P_m)={poly_disc} is not divisible by I(theta)^2={ti * ti}"
        )
    fi = 2 if m % 2 else 1
    if ti % fi or fi not in ENGSTROM_INDICES or D <= 0:
        raise InternalInconsistency(f"m={m}: index data violates field invariants")
    return FieldParams(m, M, v2m, odd_part(M), poly_disc, ti, fi, D)


def field_discriminant(m: int) -> int:
    """D(K_m) = disc(P_m) / I(theta)^2, exact."""
    return build(m).field_disc


@lru_cache(maxsize=4096)
def build(m: int) -> FieldParams:
    validate_m(m)
    return assemble(m, quartic_discriminant(defining_poly(m)))


def build_fast(m: int) -> FieldParams:
    """Like build, with the coefficient-formula discriminant (census path)."""
    validate_m(m)
    return assemble(m, quartic_discriminant_formula(defining_poly(m)))


def sqrt_M_element(m: int) -> AlgebraicNumber:
    """2 t^3 - 2m t^2 - 10 t + m, a square root of m^2 + 16 inside K_m.

    With v = t - 1/t one has v^2 - m v - 4 = 0, hence (2v - m)^2 = m^2 + 16.
    """
    return AlgebraicNumber(m, (m, -10, -2 * m, 2))
