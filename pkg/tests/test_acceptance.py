"""Acceptance criteria, one PASS/FAIL line each, zero tolerance.

Run alone with ``pytest tests/test_acceptance.py -v`` (the summary lines
appear at the end of the session) or as a script for the same lines on
stdout. Criterion 3 fails on the two highest 2-adic cases; the failures are
printed in full.
"""

import functools
import json
import sys
from pathlib import Path

import pytest

from simplest_quartic import cli
from simplest_quartic.census import (
    CLASSES,
    CensusConfig,
    build_report,
    count_by_index,
    squarefree_density,
)
from simplest_quartic.core_arith import euler_product_p1mod4, two_adic_valuation
from simplest_quartic.order_oracle import ideal_from_generators, p_maximal_order
from simplest_quartic.quartic_field import AlgebraicNumber
from simplest_quartic.splitting import (
    IdealFactorization,
    PrimeIdealFactor,
    two_generators,
    verify_factorization,
)
from simplest_quartic.verification import (
    check_dedekind,
    check_field_index,
    check_index,
    check_two,
    valid_ms,
)

pytestmark = pytest.mark.acceptance

GOLDEN = Path(__file__).parent / "golden"
CENSUS_M_MAX = 10**6


@functools.cache
def census():
    return build_report(CensusConfig(m_max=CENSUS_M_MAX, checkpoint_stride=250_000))


def _failure_dump(res, limit=None):
    shown = res.failures if limit is None else res.failures[:limit]
    return "\n".join(f"  m={m} p={p}: {detail}" for m, p, detail in shown)


def test_1_index_oracle_agreement(report_line):
    res = check_index(valid_ms(2000), p_max=50)
    report_line("1 index oracle", res.passed,
                f"v_2 index matches the closed form and odd p <= 50 contribute nothing; "
                f"{res.checked} checks, {len(res.failures)} failures")
    assert res.passed, _failure_dump(res, 20)


def test_2_common_index_divisor(report_line):
    res = check_field_index(valid_ms(10**4))
    report_line("2 common index divisor", res.passed,
                f"I(K) via splitting of 2 equals 2 iff m odd, matches field_index; "
                f"{res.checked} m, {len(res.failures)} failures")
    assert res.passed, _failure_dump(res, 20)


def test_3_factorization_of_two(report_line):
    ms = valid_ms(500)
    res = check_two(ms)
    by_case = {}
    for m in ms:
        by_case.setdefault(min(two_adic_valuation(m), 4), [0, 0])[0] += 1
    for m, _, _ in res.failures:
        by_case[min(two_adic_valuation(m), 4)][1] += 1
    cases = ", ".join(
        f"v2{'>=4' if v == 4 else f'={v}'}: {n - bad}/{n}" for v, (n, bad) in sorted(by_case.items())
    )
    report_line("3 factorization of 2", res.passed,
                f"certified closed-form generators per case ({cases}); {len(res.failures)} failures")
    if res.failures:
        print(_failure_dump(res))
    assert res.passed, f"{len(res.failures)} certificates failed; first:\n{_failure_dump(res, 1)}"


def _adjusted_high(m):
    # diagnostic only: the v2 >= 4 pair with 5 replaced by 6 in the second generator
    gens = [AlgebraicNumber(m, (2, 7, 0, 1), 4), AlgebraicNumber(m, (6, 7, 0, 1), 4)]
    return IdealFactorization(m, 2, tuple(PrimeIdealFactor(2, g, 2, 1) for g in gens), "closed_form")


def test_3_diagnostic(report_line):
    """Informational: what the failing cases look like, not the criterion itself."""
    ms = valid_ms(500)
    high = [m for m in ms if two_adic_valuation(m) >= 4]
    repaired = [m for m in high if verify_factorization(_adjusted_high(m), strict=False).passed]
    three = [m for m in ms if two_adic_valuation(m) == 3]
    unit = 0
    for m in three:
        (gen, _), = two_generators(m)
        order = p_maximal_order(m, 2)
        unit += not gen.is_algebraic_integer() and ideal_from_generators(order, 2, gen * 4).norm == 1
    ok = len(repaired) == len(high) and unit == len(three)
    report_line("3 diagnostic", ok,
                f"v2>=4 with (6+7t+t^3)/4 certifies for {len(repaired)}/{len(high)} m; "
                f"v2=3 generator is non-integral and 4x it gives the unit ideal for {unit}/{len(three)} m")
    assert ok


def test_4_dedekind_route(report_line):
    res = check_dedekind(valid_ms(200), p_max=100)
    report_line("4 dedekind route", res.passed,
                f"sum ef = 4, ramified iff p | m^2+16, ramified p = 1 mod 4, certificates pass; "
                f"{res.checked} (m, p) pairs, {len(res.failures)} failures")
    assert res.passed, _failure_dump(res, 20)


def test_5_eq1_identity(report_line):
    rep = census()
    valid = sum(t["passed"] for t in rep.class_totals.values())
    ok = rep.eq1_checked == valid and not rep.falsifications
    report_line("5 disc identity", ok,
                f"disc(P_m) = I(theta)^2 D_K with exact division for {rep.eq1_checked}/{valid} "
                f"valid m <= {rep.m_max}")
    assert ok, rep.falsifications[:10]


def test_6_no_other_indices(report_line):
    rep = census()
    ok = rep.other_indices_absent and len(rep.rows) > 0
    report_line("6 indices 3,4,6,12 absent", ok,
                f"N(x, i) = 0 for i in (3, 4, 6, 12) at all {len(rep.rows)} ladder points up to "
                f"x = {rep.rows[-1]['x']}")
    assert ok, rep.flags


def test_7a_odd_density(report_line):
    euler = euler_product_p1mod4(10**6).value
    dens = squarefree_density("odd", 10**6)
    gap = abs(dens - euler) / euler
    report_line("7a odd density", gap < 0.01,
                f"density {dens:.6f} vs product {euler:.6f}, relative gap {gap:.2e} (< 1e-2)")
    assert gap < 0.01


def test_7b_stabilization(report_line):
    st = census().stabilization
    c1, c2 = st["c1_emp_rel_change"], st["c2_emp_rel_change"]
    ok = c1 < 0.05 and c2 < 0.05
    report_line("7b stabilization", ok,
                f"x = {st['x_decade']} -> {st['x_top']}: c1 changes {c1:.2e}, c2 changes {c2:.2e} (< 5e-2)")
    assert ok


def test_7c_constants_reported(report_line):
    rep = census()
    top = rep.rows[-1]
    text = rep.summary()
    doc = json.loads(rep.to_json())
    shown = all(k in doc["closed_form_constants"] for k in ("C1", "C2")) and "c1_emp" in doc["rows"][-1]
    deviating = [name for name in ("C1", "C2") if rep.stabilization[f"{name}_rel_deviation"] > 0.05]
    flagged = all(any(f"closed form {name}=" in fl for fl in rep.flags) for name in deviating)
    ok = shown and flagged and all(fl in text for fl in rep.flags)
    dens = ", ".join(f"{c} {rep.densities[c]:.4f}" for c in CLASSES)
    report_line("7c constants reported", ok,
                f"c1_emp={top['c1_emp']:.6f} vs C1={rep.constants['C1']:.6f}, "
                f"c2_emp={top['c2_emp']:.6f} vs C2={rep.constants['C2']:.6f}; "
                f"{len(rep.flags)} deviation flag(s) in report; class densities {dens}")
    assert ok


def _cli(*argv):
    import io

    out = io.StringIO()
    assert cli.main(list(argv), out=out) == 0
    return out.getvalue()


def test_8_golden_fixtures(report_line):
    info1, info2 = _cli("info", "1"), _cli("info", "2")
    counts = {str(k): v for k, v in count_by_index(5000).items()}
    ok = (
        info1 == (GOLDEN / "info_1.txt").read_text()
        and info2 == (GOLDEN / "info_2.txt").read_text()
        and counts == json.loads((GOLDEN / "count_by_index_5000.json").read_text())
        and "D(K) = 4913" in info1 and "I(K) = 2" in info1
        and "D(K) = 2000" in info2 and "I(theta) = 4" in info2
        and (counts["1"], counts["2"]) == (2, 1)
    )
    report_line("8 golden fixtures", ok, "info 1, info 2 and count_by_index(5000) match frozen files")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
