"""Explicit prime-ideal factorization of rational primes in K_m.

Odd primes go through Dedekind's theorem on P_m mod p. The prime 2 always
goes through the closed-form generators for the five 2-adic cases of m,
because 2 divides I(theta) for every m.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .core_arith import count_monic_irreducibles, is_prime, two_adic_valuation
from .errors import BadShape, InternalInconsistency, VerificationFailed
from .finite_field_poly import factor_mod_p, reduce_mod_p
from .order_oracle import (
    IdealNF,
    ideal_from_generators,
    ideal_norm,
    ideal_power,
    ideal_product,
    is_prime_ideal,
    p_maximal_order,
    principal_p,
    unit_ideal,
)
from .quartic_field import (
    AlgebraicNumber,
    defining_poly,
    field_index,
    sqrt_M_element,
    validate_m,
)


@dataclass(frozen=True)
class PrimeIdealFactor:
    p: int
    generator: AlgebraicNumber
    e: int
    f: int
    certified: bool = True  # f read off an oracle norm, not implied by sum(e*f) = 4

    def __str__(self) -> str:
        return f"<{self.p}, {self.generator}>^{self.e}  (e={self.e}, f={self.f})"


@dataclass(frozen=True)
class IdealFactorization:
    m: int
    p: int
    factors: tuple[PrimeIdealFactor, ...]
    source: str  # "dedekind" | "closed_form" | "oracle"

    def shape(self) -> list[tuple[int, int]]:
        return sorted((pf.e, pf.f) for pf in self.factors)

    def degree(self) -> int:
        return sum(pf.e * pf.f for pf in self.factors)


@dataclass
class Certificate:
    m: int
    p: int
    passed: bool
    checks: list[tuple[str, bool]] = field(default_factory=list)
    normal_forms: list[tuple] = field(default_factory=list)
    order_basis: tuple = ()
    order_den: int = 1
    first_failure: str | None = None

    def record(self, name: str, ok: bool) -> None:
        self.checks.append((name, ok))
        if not ok and self.first_failure is None:
            self.first_failure = name
            self.passed = False

    def render(self) -> str:
        lines = [f"m={self.m} p={self.p}: {'PASS' if self.passed else 'FAIL'}"]
        lines.append(f"  order: den={self.order_den} basis={self.order_basis}")
        for k, nf in enumerate(self.normal_forms):
            lines.append(f"  P{k + 1} normal form: {nf}")
        for name, ok in self.checks:
            lines.append(f"  [{'ok' if ok else 'FAILED'}] {name}")
        return "\n".join(lines)


def _reduced_generator(m: int, coeffs, p: int) -> AlgebraicNumber:
    # g(theta) with coefficients mod p; an inert p gives the generator 0
    red = AlgebraicNumber.from_poly(m, coeffs)
    return AlgebraicNumber(m, tuple(c % p for c in red.coeffs))


def factor_odd_prime(m: int, p: int) -> IdealFactorization:
    """Dedekind factorization <p, g_i(theta)>^e_i from P_m mod p."""
    validate_m(m)
    if p == 2 or not is_prime(p):
        raise ValueError(f"factor_odd_prime needs an odd prime, got {p}")
    fact = factor_mod_p(reduce_mod_p(defining_poly(m), p))
    factors = tuple(
        PrimeIdealFactor(p, _reduced_generator(m, g.coeffs, p), e, g.degree)
        for g, e in fact.factors
    )
    return IdealFactorization(m, p, factors, "dedekind")


def two_generators(m: int) -> list[tuple[AlgebraicNumber, int]]:
    """(second generator, ramification index) pairs for the ideals above 2."""
    validate_m(m)
    v = two_adic_valuation(m)
    if v == 0:
        root = sqrt_M_element(m)
        return [((1 + root) / 2, 1), ((1 - root) / 2, 1)]
    if v == 1:
        return [(AlgebraicNumber(m, (6, -m, 10, m), 4), 2)]
    if v == 2:
        return [(AlgebraicNumber(m, (1, 1, 1, 1), 4), 4)]
    if v == 3:
        num = (-m * m + 8, -(m**3 + 21 * m - 56), 5 * m * m + 168, m**3 + 25 * m + 4)
        return [(AlgebraicNumber(m, num, 16), 2)]
    return [(AlgebraicNumber(m, (2, 7, 0, 1), 4), 2), (AlgebraicNumber(m, (5, 7, 0, 1), 4), 2)]


def factor_two(m: int) -> IdealFactorization:
    """Factorization of 2 from the closed-form generators, used verbatim.

    Residue degrees are read off the oracle norm of <2, generator>. A
    generator that is not an algebraic integer has no such norm; its f is
    then the value implied by sum(e*f) = 4 and the factor is marked
    uncertified, leaving the verdict to verify_factorization.
    """
    order = p_maximal_order(m, 2)
    gens = two_generators(m)
    factors = []
    for gen, e in gens:
        implied = 4 // (e * len(gens))
        if not gen.is_algebraic_integer():
            factors.append(PrimeIdealFactor(2, gen, e, implied, certified=False))
            continue
        norm = ideal_norm(ideal_from_generators(order, 2, gen))
        f = norm.bit_length() - 1
        if norm != 1 << f or f == 0:
            factors.append(PrimeIdealFactor(2, gen, e, implied, certified=False))
        else:
            factors.append(PrimeIdealFactor(2, gen, e, f))
    return IdealFactorization(m, 2, tuple(factors), "closed_form")


def _ramification(order, ideal: IdealNF, p: int) -> int:
    target = principal_p(order, p)
    e, power = 0, unit_ideal(order)
    while True:
        nxt = ideal_product(power, ideal)
        if not all(nxt.contains_coords(r) for r in target.matrix):
            return e
        e, power = e + 1, nxt


def oracle_factor_two(m: int) -> IdealFactorization:
    """Splitting of 2 found by the oracle alone, with no closed-form input.

    Every class of O/2O gives a candidate <2, a>; the prime ones are kept,
    e is the largest k with P^k dividing 2O, f comes from the norm.
    """
    order = p_maximal_order(m, 2)
    seen = {}
    for bits in range(1, 16):
        y = [(bits >> k) & 1 for k in range(4)]
        ideal = ideal_from_generators(order, 2, order.from_coords(y))
        if ideal.norm in (1, 16) or ideal.matrix in seen:
            continue
        prime, f = is_prime_ideal(order, ideal, 2)
        if prime:
            seen[ideal.matrix] = (order.from_coords(y), f, ideal)
    factors = tuple(
        PrimeIdealFactor(2, gen, _ramification(order, ideal, 2), f)
        for gen, f, ideal in seen.values()
    )
    return IdealFactorization(m, 2, factors, "oracle")


def factor_prime(m: int, p: int) -> IdealFactorization:
    return factor_two(m) if p == 2 else factor_odd_prime(m, p)


def verify_factorization(fact: IdealFactorization, strict: bool = True) -> Certificate:
    """Re-prove p O = prod P_i^e_i inside the oracle's p-maximal order.

    Raises VerificationFailed (carrying the certificate) on the first
    violated condition unless ``strict`` is False.
    """
    m, p = fact.m, fact.p
    order = p_maximal_order(m, p)
    cert = Certificate(m, p, True, order_basis=order.basis, order_den=order.den)
    cert.record("sum of e*f equals 4", fact.degree() == 4)
    ideals: list[IdealNF] = []
    for k, pf in enumerate(fact.factors):
        ok = pf.generator.is_algebraic_integer()
        cert.record(f"P{k + 1}: generator {pf.generator} is an algebraic integer", ok)
        if ok:
            ok = order.contains(pf.generator)
            cert.record(f"P{k + 1}: generator lies in the p-maximal order", ok)
        if not ok:
            continue
        ideal = ideal_from_generators(order, p, pf.generator)
        ideals.append(ideal)
        cert.normal_forms.append(ideal.matrix)
        cert.record(f"P{k + 1}: norm {ideal.norm} equals {p}^{pf.f}", ideal.norm == p**pf.f)
        if 1 < ideal.norm:
            prime, f = is_prime_ideal(order, ideal, p)
            cert.record(f"P{k + 1}: prime with residue degree {pf.f}", prime and f == pf.f)
        else:
            cert.record(f"P{k + 1}: proper ideal", False)
    if len(ideals) == len(fact.factors):
        distinct = len({i.matrix for i in ideals}) == len(ideals)
        cert.record("factors pairwise distinct", distinct)
        prod = unit_ideal(order)
        for ideal, pf in zip(ideals, fact.factors):
            prod = ideal_product(prod, ideal_power(ideal, pf.e))
        cert.record("product of P_i^e_i equals p*O", prod == principal_p(order, p))
    if strict and not cert.passed:
        raise VerificationFailed(cert.first_failure, cert)
    return cert


def is_common_index_divisor(p: int, shape) -> bool:
    """True iff no monic quartic over F_p factors with this (e, f) shape."""
    shape = list(shape)
    if not shape or any(e < 1 or f < 1 for e, f in shape) or sum(e * f for e, f in shape) != 4:
        raise BadShape(f"shape {shape} does not describe a degree-4 splitting")
    need = Counter(f for _, f in shape)
    return any(n > count_monic_irreducibles(p, d) for d, n in need.items())


def field_index_via_splitting(m: int) -> int:
    """2 if 2 is a common index divisor, else 1.

    The shape of 2 comes from the oracle's own splitting and must match the
    (e, f) shape reported by factor_two.
    """
    shape = oracle_factor_two(m).shape()
    if shape != factor_two(m).shape():
        raise InternalInconsistency(
            f"m={m}: oracle splitting {shape} differs from closed form {factor_two(m).shape()}"
        )
    got = 2 if is_common_index_divisor(2, shape) else 1
    if got != field_index(m):
        raise InternalInconsistency(f"m={m}: splitting gives I(K)={got}, closed form {field_index(m)}")
    return got
