"""Batch checks of the index and factorization claims against the oracle."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .core_arith import primes_up_to, two_adic_valuation
from .errors import QuarticError, VerificationFailed
from .order_oracle import ideal_from_generators, index_valuation, p_maximal_order
from .quartic_field import field_index, validate_m
from .splitting import (
    factor_odd_prime,
    factor_two,
    field_index_via_splitting,
    oracle_factor_two,
    verify_factorization,
)

BATTERIES = ("index", "field_index", "two", "dedekind")


@dataclass
class BatteryResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)  # (m, p, detail)

    @property
    def passed(self) -> bool:
        return not self.failures

    def merge(self, other: "BatteryResult") -> "BatteryResult":
        return BatteryResult(self.name, self.checked + other.checked, self.failures + other.failures)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}: {self.checked} checks, {len(self.failures)} failures"


def valid_ms(m_max: int, m_min: int = 1) -> list[int]:
    out = []
    for m in range(m_min, m_max + 1):
        try:
            validate_m(m)
        except QuarticError:
            continue
        out.append(m)
    return out


def prop1_exponent(m: int) -> int:
    return min(two_adic_valuation(m), 3) + 1


def check_index(ms, p_max: int = 50) -> BatteryResult:
    res = BatteryResult("index")
    odd = primes_up_to(p_max)[1:]
    for m in ms:
        got = index_valuation(m, 2)
        res.checked += 1
        if got != prop1_exponent(m):
            res.failures.append((m, 2, f"v_2(index)={got}, expected {prop1_exponent(m)}"))
        for p in odd:
            res.checked += 1
            v = index_valuation(m, p)
            if v:
                res.failures.append((m, p, f"v_{p}(index)={v}, expected 0"))
    return res


def check_field_index(ms) -> BatteryResult:
    res = BatteryResult("field_index")
    for m in ms:
        res.checked += 1
        try:
            got = field_index_via_splitting(m)
        except QuarticError as exc:
            res.failures.append((m, 2, str(exc)))
            continue
        want = 2 if m % 2 else 1
        if got != want or field_index(m) != want:
            res.failures.append((m, 2, f"I(K)={got}, expected {want}"))
    return res


def check_two(ms) -> BatteryResult:
    res = BatteryResult("two")
    for m in ms:
        res.checked += 1
        fact = factor_two(m)
        try:
            verify_factorization(fact)
        except VerificationFailed as exc:
            cert = exc.certificate
            order = p_maximal_order(m, 2)
            lines = [exc.reason, cert.render(), "  oracle splitting of 2:"]
            for pf in oracle_factor_two(m).factors:
                nf = ideal_from_generators(order, 2, pf.generator).matrix
                lines.append(f"    <2, {pf.generator}> e={pf.e} f={pf.f} normal form {nf}")
            detail = "\n".join(lines)
            res.failures.append((m, 2, detail))
    return res


def check_dedekind(ms, p_max: int = 100) -> BatteryResult:
    res = BatteryResult("dedekind")
    odd = primes_up_to(p_max)[1:]
    for m in ms:
        M = m * m + 16
        for p in odd:
            res.checked += 1
            fact = factor_odd_prime(m, p)
            problems = []
            if fact.degree() != 4:
                problems.append(f"sum ef = {fact.degree()}")
            ramified = any(pf.e > 1 for pf in fact.factors)
            if ramified != (M % p == 0):
                problems.append(f"ramified={ramified} but p | m^2+16 is {M % p == 0}")
            if ramified and p % 4 != 1:
                problems.append("ramified odd prime is not 1 mod 4")
            cert = verify_factorization(fact, strict=False)
            if not cert.passed:
                problems.append(cert.render())
            if problems:
                res.failures.append((m, p, "; ".join(problems)))
    return res


def _run(args) -> BatteryResult:
    name, ms, p_max = args
    if name == "index":
        return check_index(ms, p_max)
    if name == "field_index":
        return check_field_index(ms)
    if name == "two":
        return check_two(ms)
    if name == "dedekind":
        return check_dedekind(ms, p_max)
    raise ValueError(f"unknown battery {name!r}")


def run_battery(name: str, m_max: int, p_max: int = 50, workers: int = 1,
                chunk: int = 250) -> BatteryResult:
    ms = valid_ms(m_max)
    jobs = [(name, ms[i : i + chunk], p_max) for i in range(0, len(ms), chunk)]
    total = BatteryResult(name)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_run, jobs):
                total = total.merge(part)
    else:
        for job in jobs:
            total = total.merge(_run(job))
    return total
