"""p-maximal orders of K_m and ideal arithmetic, computed from first principles.

An ``Order`` is a full Z-lattice in K_m given by an upper-triangular HNF basis
over a common denominator. The p-maximal order is reached by one Dedekind
criterion step followed by Round-2 enlargement (p-radical, then its ring of
multipliers) until the multiplier ring stops growing. Everything is exact;
there is no floating point in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

from .core_arith import factorize
from .errors import (
    InternalInconsistency,
    MixedOrders,
    NonConvergence,
    NotAbovePrime,
    NotInOrder,
)
from .finite_field_poly import _divmod, _gcd, _mul, factor_mod_p, reduce_mod_p
from .linalg import (
    Matrix,
    det_upper,
    hnf,
    left_kernel_mod_p,
    mat_mul_mod_p,
    rank_mod_p,
    reduce_mod_lattice,
    right_kernel_mod_p,
    rref_mod_p,
    solve_upper,
    solve_upper_int,
)
from .quartic_field import AlgebraicNumber, defining_poly, validate_m

MAX_ROUND2_ITERATIONS = 8
EXHAUSTIVE_QUOTIENT_LIMIT = 16

_IDENTITY = tuple(tuple(int(i == j) for j in range(4)) for i in range(4))


class Order:
    """Z-module spanned by rows(basis)/den in power-basis coordinates."""

    def __init__(self, m: int, basis, den: int = 1):
        basis = hnf(basis, 4)
        g = math.gcd(den, *(x for row in basis for x in row))
        self.m = m
        self.den = den // g
        self.basis: Matrix = tuple(tuple(x // g for x in row) for row in basis)

    @classmethod
    def equation_order(cls, m: int) -> "Order":
        return cls(m, _IDENTITY, 1)

    @property
    def key(self):
        return (self.m, self.den, self.basis)

    def __eq__(self, other):
        return isinstance(other, Order) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Order(m={self.m}, den={self.den}, basis={self.basis})"

    def element(self, i: int) -> AlgebraicNumber:
        return AlgebraicNumber(self.m, self.basis[i], self.den)

    def elements(self) -> list[AlgebraicNumber]:
        return [self.element(i) for i in range(4)]

    def from_coords(self, y) -> AlgebraicNumber:
        vec = [sum(y[i] * self.basis[i][j] for i in range(4)) for j in range(4)]
        return AlgebraicNumber(self.m, vec, self.den)

    def coords(self, alpha: AlgebraicNumber) -> list[Fraction]:
        if alpha.m != self.m:
            raise MixedOrders("element and order belong to different fields")
        target = [Fraction(c * self.den, alpha.den) for c in alpha.coeffs]
        return solve_upper(self.basis, target)

    def int_coords(self, alpha: AlgebraicNumber) -> list[int] | None:
        """Integral coordinates of alpha, or None if alpha is not in the order."""
        if alpha.m != self.m:
            raise MixedOrders("element and order belong to different fields")
        num = [c * self.den for c in alpha.coeffs]
        if any(x % alpha.den for x in num):
            return None
        return solve_upper_int(self.basis, [x // alpha.den for x in num])

    def contains(self, alpha: AlgebraicNumber) -> bool:
        return self.int_coords(alpha) is not None

    @property
    def index(self) -> int:
        """Module index (order : Z[theta])."""
        q, r = divmod(self.den**4, det_upper(self.basis))
        if r:
            raise InternalInconsistency(f"{self!r} does not contain Z[theta]")
        return q

    @cached_property
    def table(self) -> list[list[list[int]]]:
        """table[i][j] = coordinates of w_i * w_j; raises if not a ring."""
        els = self.elements()
        out = []
        for i in range(4):
            row = []
            for j in range(4):
                y = self.int_coords(els[i] * els[j])
                if y is None:
                    raise InternalInconsistency(f"{self!r} is not closed under multiplication")
                row.append(y)
            out.append(row)
        return out

    @cached_property
    def one(self) -> list[int]:
        y = self.int_coords(AlgebraicNumber.from_int(self.m, 1))
        if y is None:
            raise InternalInconsistency(f"{self!r} does not contain 1")
        return y

    def mul_coords(self, y, z, p: int | None = None) -> list[int]:
        t = self.table
        out = [0, 0, 0, 0]
        for i in range(4):
            yi = y[i]
            if not yi:
                continue
            ti = t[i]
            for j in range(4):
                c = yi * z[j]
                if c:
                    v = ti[j]
                    out[0] += c * v[0]
                    out[1] += c * v[1]
                    out[2] += c * v[2]
                    out[3] += c * v[3]
        if p is not None:
            out = [x % p for x in out]
        return out

    def pow_coords_mod_p(self, y, e: int, p: int) -> list[int]:
        result = [x % p for x in self.one]
        base = [x % p for x in y]
        while e:
            if e & 1:
                result = self.mul_coords(result, base, p)
            base = self.mul_coords(base, base, p)
            e >>= 1
        return result

    def frobenius_matrix(self, q: int, p: int) -> list[list[int]]:
        """Rows: coordinates of w_i^q mod p."""
        return [self.pow_coords_mod_p(_IDENTITY[i], q, p) for i in range(4)]

    def is_closed(self) -> bool:
        try:
            _ = self.table
        except InternalInconsistency:
            return False
        return True

    def discriminant(self) -> int:
        """det(Tr(w_i w_j)), computed from traces on the power basis."""
        els = self.elements()
        gram = [[trace(els[i] * els[j]) for j in range(4)] for i in range(4)]
        d = _fraction_det(gram)
        if d.denominator != 1:
            raise InternalInconsistency("order discriminant is not an integer")
        return int(d)


def trace(alpha: AlgebraicNumber) -> Fraction:
    mat = alpha.multiplication_matrix()
    return sum((mat[i][i] for i in range(4)), Fraction(0))


def _fraction_det(a) -> Fraction:
    a = [[Fraction(x) for x in row] for row in a]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return det


def _frobenius_exponent(p: int) -> int:
    q = p
    while q < 4:
        q *= p
    return q


def _p_identity(p: int) -> list[list[int]]:
    return [[p * int(i == j) for j in range(4)] for i in range(4)]


def p_radical(order: Order, p: int) -> Matrix:
    """HNF (order coordinates) of {x : x^(p^j) in p*order}, p^j >= 4."""
    frob = order.frobenius_matrix(_frobenius_exponent(p), p)
    ker = left_kernel_mod_p(frob, p)
    return hnf(ker + _p_identity(p), 4)


def round2_step(order: Order, p: int) -> Order | None:
    """Ring of multipliers of the p-radical, or None if it equals ``order``."""
    rad = p_radical(order, p)
    rows = []
    for i in range(4):
        row = []
        for beta in rad:
            prod = order.mul_coords(_IDENTITY[i], beta)
            z = solve_upper_int(rad, prod)
            if z is None:
                raise InternalInconsistency("p-radical is not an ideal")
            row.extend(x % p for x in z)
        rows.append(row)
    ker = left_kernel_mod_p(rows, p)
    if not ker:
        return None
    u = hnf(ker + _p_identity(p), 4)
    new_rows = [
        [sum(u[i][k] * order.basis[k][j] for k in range(4)) for j in range(4)] for i in range(4)
    ]
    return Order(order.m, new_rows, order.den * p)


def _lift(coeffs) -> list[int]:
    return list(coeffs)


def dedekind_test(m: int, p: int) -> tuple[bool, Order]:
    """Dedekind criterion for Z[theta] at p.

    Returns (True, Z[theta]) when Z[theta] is p-maximal, otherwise
    (False, Z[theta] + (U(theta)/p) Z[theta]) with U the lift of f / Z.
    """
    validate_m(m)
    f = defining_poly(m)
    fact = factor_mod_p(reduce_mod_p(f, p))
    g, h = [1], [1]
    for irr, e in fact.factors:
        g = _mul(g, list(irr.coeffs), p)
        for _ in range(e - 1):
            h = _mul(h, list(irr.coeffs), p)
    gh = _int_mul(_lift(g), _lift(h))
    diff = [a - b for a, b in zip(gh + [0] * (5 - len(gh)), f)]
    if any(x % p for x in diff):
        raise InternalInconsistency("g*h does not reduce to f mod p")
    big_f = [(x // p) % p for x in diff]
    while big_f and big_f[-1] == 0:
        big_f.pop()
    zpoly = _gcd(_gcd(big_f, g, p), h, p)
    zeq = Order.equation_order(m)
    if len(zpoly) <= 1:
        return True, zeq
    u = _divmod([x % p for x in f], zpoly, p)[0]
    u_theta = AlgebraicNumber.from_poly(m, u)
    theta = AlgebraicNumber.theta(m)
    rows = [[p * int(i == j) for j in range(4)] for i in range(4)]
    cur = u_theta
    for _ in range(4):
        rows.append(list(cur.coeffs))
        cur = cur * theta
    enlarged = Order(m, rows, p)
    if enlarged.index != p ** (len(zpoly) - 1):
        raise InternalInconsistency("Dedekind enlargement has the wrong index")
    return False, enlarged


def _int_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def enlarge_to_p_maximal(order: Order, p: int) -> Order:
    for _ in range(MAX_ROUND2_ITERATIONS):
        nxt = round2_step(order, p)
        if nxt is None:
            return order
        order = nxt
    raise NonConvergence(f"Round-2 did not stabilize at p={p} after {MAX_ROUND2_ITERATIONS} steps")


@lru_cache(maxsize=8192)
def p_maximal_order(m: int, p: int, method: str = "dedekind") -> Order:
    """Order with p-part of (order : Z[theta]) maximal.

    ``method="dedekind"`` starts from the Dedekind enlargement;
    ``method="round2"`` runs Round-2 from Z[theta] alone.
    """
    validate_m(m)
    if method == "dedekind":
        maximal, order = dedekind_test(m, p)
        if maximal:
            return order
    elif method == "round2":
        order = Order.equation_order(m)
    else:
        raise ValueError(f"unknown method {method!r}")
    return enlarge_to_p_maximal(order, p)


def index_valuation(m: int, p: int) -> int:
    """v_p of (O_K : Z[theta])."""
    idx = p_maximal_order(m, p).index
    v = 0
    while idx % p == 0:
        idx //= p
        v += 1
    if idx != 1:
        raise InternalInconsistency("p-maximal order index is not a power of p")
    return v


def maximal_order(m: int) -> Order:
    """The ring of integers, assembled after checking only p = 2 enlarges Z[theta]."""
    validate_m(m)
    for q, _ in factorize(m * m + 16):
        if q != 2 and not dedekind_test(m, q)[0]:
            raise InternalInconsistency(f"odd prime {q} enlarges Z[theta] for m={m}")
    return p_maximal_order(m, 2)


# -- ideals -----------------------------------------------------------------


@dataclass(frozen=True)
class IdealNF:
    order: Order = field(compare=False)
    matrix: Matrix
    order_key: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if not self.order_key:
            object.__setattr__(self, "order_key", self.order.key)

    @property
    def norm(self) -> int:
        return det_upper(self.matrix)

    def contains_coords(self, y) -> bool:
        return solve_upper_int(self.matrix, y) is not None

    def generators(self) -> list[AlgebraicNumber]:
        return [self.order.from_coords(r) for r in self.matrix]


def unit_ideal(order: Order) -> IdealNF:
    return IdealNF(order, _IDENTITY)


def principal_p(order: Order, p: int) -> IdealNF:
    return IdealNF(order, hnf(_p_identity(p), 4))


def ideal_from_generators(order: Order, p: int, alpha: AlgebraicNumber) -> IdealNF:
    """Normal form of p*O + alpha*O."""
    y = order.int_coords(alpha)
    if y is None:
        raise NotInOrder(f"{alpha} is not in the order")
    rows = _p_identity(p)
    if any(y):
        rows += [order.mul_coords(y, _IDENTITY[i]) for i in range(4)]
    return IdealNF(order, hnf(rows, 4))


def ideal_product(a: IdealNF, b: IdealNF) -> IdealNF:
    if a.order_key != b.order_key:
        raise MixedOrders("ideals live in different orders")
    order = a.order
    rows = [order.mul_coords(r, s) for r in a.matrix for s in b.matrix]
    return IdealNF(order, hnf(rows, 4))


def ideal_power(a: IdealNF, k: int) -> IdealNF:
    result = unit_ideal(a.order)
    for _ in range(k):
        result = ideal_product(result, a)
    return result


def ideal_norm(a: IdealNF) -> int:
    return a.norm


def _log_p(n: int, p: int) -> int | None:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k if n == 1 else None


def _quotient_is_field_linear(order: Order, a: IdealNF, p: int, f: int) -> bool:
    w = rref_mod_p(a.matrix, p)
    if len(w) != 4 - f:
        raise InternalInconsistency("ideal above p has inconsistent F_p dimension")
    ann = right_kernel_mod_p(w, p, 4)
    ann_cols = [list(c) for c in zip(*ann)]  # 4 x f
    frob_q = order.frobenius_matrix(_frobenius_exponent(p), p)
    if rank_mod_p(mat_mul_mod_p(frob_q, ann_cols, p), p) != f:
        return False  # nilpotents in O/a
    frob = order.frobenius_matrix(p, p)
    shifted = [[(frob[i][j] - int(i == j)) % p for j in range(4)] for i in range(4)]
    return rank_mod_p(mat_mul_mod_p(shifted, ann_cols, p), p) == f - 1


def _quotient_is_field_exhaustive(order: Order, a: IdealNF) -> bool:
    diag = [a.matrix[i][i] for i in range(4)]
    reps = [[]]
    for d in diag:
        reps = [r + [k] for r in reps for k in range(d)]
    nonzero = [r for r in reps if any(r)]
    zero = (0, 0, 0, 0)
    for x in nonzero:
        for y in nonzero:
            if reduce_mod_lattice(a.matrix, order.mul_coords(x, y)) == zero:
                return False
    return True


def is_prime_ideal(order: Order, a: IdealNF, p: int) -> tuple[bool, int]:
    """(is prime, residue degree) for an ideal containing p*order.

    Primality means order/a is a field: reduced (trivial kernel of a
    Frobenius power) with one-dimensional Frobenius-fixed subalgebra. Small
    quotients are additionally checked by enumerating all products.
    """
    if a.order_key != order.key:
        raise MixedOrders("ideal does not belong to this order")
    for i in range(4):
        if not a.contains_coords([p * int(i == j) for j in range(4)]):
            raise NotAbovePrime(f"ideal does not contain {p}")
    f = _log_p(a.norm, p)
    if f is None or f == 0:
        raise NotAbovePrime(f"ideal of norm {a.norm} is not a proper ideal above {p}")
    linear = _quotient_is_field_linear(order, a, p, f)
    if a.norm <= EXHAUSTIVE_QUOTIENT_LIMIT:
        if _quotient_is_field_exhaustive(order, a) != linear:
            raise InternalInconsistency("primality tests disagree")
    return linear, f
