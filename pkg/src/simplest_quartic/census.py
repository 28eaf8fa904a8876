"""Counting simplest quartic fields by discriminant and index.

Valid parameters m come from a sieve over m: the odd part of m^2 + 16 fails
to be squarefree exactly when p^2 | m^2 + 16 for some prime p = 1 mod 4,
i.e. m = +-r mod p^2 with r^2 = -16. Counting is exact: every valid m up to
the bound gets its discriminant, and N(x, i) is read off sorted lists.

Work is split into ranges of m whose partial results merge associatively,
so ranges can run in any order on any number of workers.
"""

from __future__ import annotations

import bisect
import csv
import heapq
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from . import kernels
from .core_arith import (
    euler_product_p1mod4,
    is_perfect_square,
    primes_up_to,
    sqrt_minus16_mod_p2,
    two_adic_valuation,
)
from .errors import InternalInconsistency, UnsupportedIndex
from .finite_field_poly import factor_mod_p, quartic_discriminant_formula, reduce_mod_p
from .quartic_field import ENGSTROM_INDICES, FieldParams, assemble, defining_poly

CLASSES = ("odd", "v2=1", "v2=2", "v2>=3")
# D(K_m) = 4 M^3 / I(theta)^2 with I(theta) = 2, 4, 8, 16 per class
CLASS_DISC_DIVISOR = {"odd": 1, "v2=1": 4, "v2=2": 16, "v2>=3": 64}
# share of all m in each class; a class then contributes
# share * euler * divisor^(1/6) * x^(1/6) fields with D <= x
CLASS_SHARE = {"odd": 1 / 2, "v2=1": 1 / 4, "v2=2": 1 / 8, "v2>=3": 1 / 8}
DEVIATION_FLAG = 0.05
CONSTANT_DIGITS = 12

C1_PREFACTOR = 1 / (4 * 4 ** (1 / 3)) + 1 / (4 * 2 ** (1 / 3)) + 1 / 4
C2_PREFACTOR = 1 / 4
TOTAL_PREFACTOR = 1 / (4 * 4 ** (1 / 3)) + 1 / (4 * 2 ** (1 / 3)) + 1 / 2


def residue_class(m: int) -> str:
    v = two_adic_valuation(m)
    return CLASSES[min(v, 3)]


# -- sieve ------------------------------------------------------------------

_root_cache: dict[int, tuple[list[int], list[int]]] = {}


def _square_classes(limit: int) -> tuple[list[int], list[int]]:
    """Moduli p^2 and residues r with r^2 = -16 mod p^2, all odd p <= limit."""
    key = max(limit, 1000)
    for cached, val in _root_cache.items():
        if cached >= key:
            mods, res = val
            cut = bisect.bisect_right(mods, limit * limit)
            return mods[:cut], res[:cut]
    mods, res = [], []
    for p in primes_up_to(key)[1:]:
        roots = sqrt_minus16_mod_p2(p)
        if roots:
            mods += [p * p, p * p]
            res += list(roots)
    _root_cache.clear()
    _root_cache[key] = (mods, res)
    cut = bisect.bisect_right(mods, limit * limit)
    return mods[:cut], res[:cut]


def squarefree_mask(lo: int, hi: int) -> bytearray:
    """mask[m - lo] = 1 iff the odd part of m^2 + 16 is squarefree, lo <= m <= hi."""
    if hi < lo:
        return bytearray()
    mask = bytearray(b"\x01") * (hi - lo + 1)
    mods, res = _square_classes(math.isqrt(hi * hi + 16))
    kernels.mark_classes(mask, lo, mods, res)
    return mask


# -- enumeration ------------------------------------------------------------


def field_params_fast(m: int) -> FieldParams:
    fp = assemble(m, quartic_discriminant_formula(defining_poly(m)))
    # the completeness bound relies on disc(P_m) = 4 M^3; hold every m to it
    if fp.poly_disc != 4 * fp.M**3:
        raise InternalInconsistency(f"m={m}: disc(P_m)={fp.poly_disc} differs from 4(m^2+16)^3")
    return fp


def enumerate_fields(m_max: int, tally: dict | None = None) -> Iterator[FieldParams]:
    """FieldParams for every valid m <= m_max, increasing; rejections go to ``tally``."""
    if tally is None:
        tally = {}
    mask = squarefree_mask(1, m_max)
    for m in range(1, m_max + 1):
        if is_perfect_square(m * m + 16):
            tally["excluded_square"] = tally.get("excluded_square", 0) + 1
        elif not mask[m - 1]:
            tally["not_squarefree"] = tally.get("not_squarefree", 0) + 1
        else:
            yield field_params_fast(m)


def _merge_ranges(ranges):
    out = []
    for lo, hi in sorted(ranges):
        if out and lo <= out[-1][1] + 1:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return tuple(out)


@dataclass
class CensusPartial:
    """Exact tallies for a set of m-ranges; ``merge`` is associative and commutative."""

    ranges: tuple = ()
    discs: dict = field(default_factory=lambda: {c: [] for c in CLASSES})
    class_total: dict = field(default_factory=lambda: dict.fromkeys(CLASSES, 0))
    class_pass: dict = field(default_factory=lambda: dict.fromkeys(CLASSES, 0))
    rejected: dict = field(default_factory=lambda: {"excluded_square": 0, "not_squarefree": 0})
    falsifications: list = field(default_factory=list)
    eq1_checked: int = 0

    def merge(self, other: "CensusPartial") -> "CensusPartial":
        return CensusPartial(
            ranges=_merge_ranges(self.ranges + other.ranges),
            discs={c: list(heapq.merge(self.discs[c], other.discs[c])) for c in CLASSES},
            class_total={c: self.class_total[c] + other.class_total[c] for c in CLASSES},
            class_pass={c: self.class_pass[c] + other.class_pass[c] for c in CLASSES},
            rejected={k: self.rejected[k] + other.rejected[k] for k in self.rejected},
            falsifications=sorted(self.falsifications + other.falsifications),
            eq1_checked=self.eq1_checked + other.eq1_checked,
        )

    def __eq__(self, other):
        if not isinstance(other, CensusPartial):
            return NotImplemented
        return (
            self.ranges == other.ranges
            and self.discs == other.discs
            and self.class_total == other.class_total
            and self.class_pass == other.class_pass
            and self.rejected == other.rejected
            and self.falsifications == other.falsifications
            and self.eq1_checked == other.eq1_checked
        )


def process_range(lo: int, hi: int, records: list | None = None) -> CensusPartial:
    """Tally m in [lo, hi]; optionally append checkpoint records."""
    part = CensusPartial(ranges=((lo, hi),) if hi >= lo else ())
    if hi < lo:
        return part
    mask = squarefree_mask(lo, hi)
    discs = part.discs
    for m in range(lo, hi + 1):
        cls = residue_class(m)
        part.class_total[cls] += 1
        if is_perfect_square(m * m + 16):
            part.rejected["excluded_square"] += 1
            valid = False
        elif not mask[m - lo]:
            part.rejected["not_squarefree"] += 1
            valid = False
        else:
            valid = True
        if not valid:
            if records is not None:
                records.append({"m": m, "valid": False, "v2m": two_adic_valuation(m),
                                "field_disc": None, "field_index": None})
            continue
        part.class_pass[cls] += 1
        try:
            fp = field_params_fast(m)
        except InternalInconsistency as exc:
            part.falsifications.append((m, str(exc)))
            if records is not None:
                records.append({"m": m, "valid": True, "v2m": two_adic_valuation(m),
                                "field_disc": None, "field_index": None, "falsification": str(exc)})
            continue
        part.eq1_checked += 1
        discs[cls].append(fp.field_disc)
        if records is not None:
            records.append({"m": m, "valid": True, "v2m": fp.v2m,
                            "field_disc": str(fp.field_disc), "field_index": fp.field_index})
    for c in CLASSES:
        discs[c].sort()
    return part


def partial_from_records(lo: int, hi: int, records) -> CensusPartial:
    """Rebuild a range's partial from checkpoint records (no recomputation)."""
    part = CensusPartial(ranges=((lo, hi),))
    for rec in records:
        m = rec["m"]
        cls = residue_class(m)
        part.class_total[cls] += 1
        if not rec["valid"]:
            key = "excluded_square" if is_perfect_square(m * m + 16) else "not_squarefree"
            part.rejected[key] += 1
            continue
        part.class_pass[cls] += 1
        if rec.get("falsification"):
            part.falsifications.append((m, rec["falsification"]))
            continue
        part.eq1_checked += 1
        part.discs[cls].append(int(rec["field_disc"]))
    for c in CLASSES:
        part.discs[c].sort()
    return part


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _run_chunk(args) -> CensusPartial:
    lo, hi, ckpt_dir = args
    if ckpt_dir is None:
        return process_range(lo, hi)
    path = Path(ckpt_dir) / f"chunk_{lo:012d}_{hi:012d}.ndjson"
    if path.exists():
        with path.open() as fh:
            return partial_from_records(lo, hi, (json.loads(line) for line in fh))
    records: list = []
    part = process_range(lo, hi, records)
    _write_atomic(path, "".join(json.dumps(r, sort_keys=True) + "\n" for r in records))
    return part


# -- counting ---------------------------------------------------------------


def index_by_class() -> dict[str, int]:
    """I(K_m) per residue class of m.

    The 2-part is the closed form (2 for odd m); the 3-part is decided from
    the splitting of 3, which Dedekind's theorem reads off P_m mod 3 because
    3 never divides disc(P_m) = 4 (m^2 + 16)^3. That splitting depends on
    m mod 3 only.
    """
    from .splitting import is_common_index_divisor

    three = any(
        is_common_index_divisor(3, factor_mod_p(reduce_mod_p(defining_poly(r), 3)).shape())
        for r in range(3)
    )
    base = 3 if three else 1
    return {c: base * (2 if c == "odd" else 1) for c in CLASSES}


def cid3_by_residue() -> dict[int, bool]:
    from .splitting import is_common_index_divisor

    return {
        r: is_common_index_divisor(3, factor_mod_p(reduce_mod_p(defining_poly(r), 3)).shape())
        for r in range(3)
    }


def counts_at(part: CensusPartial, x: int, class_index: dict | None = None) -> dict[int, int]:
    """N(x, i) for every Engstrom index i, from exact sorted discriminants."""
    class_index = class_index or index_by_class()
    out = dict.fromkeys(ENGSTROM_INDICES, 0)
    for c in CLASSES:
        out[class_index[c]] += bisect.bisect_right(part.discs[c], x)
    return out


def class_counts_at(part: CensusPartial, x: int) -> dict[str, int]:
    return {c: bisect.bisect_right(part.discs[c], x) for c in CLASSES}


def m_bound_for_x(x: int) -> int:
    """Smallest m_max such that every field with D <= x has m <= m_max."""
    hi = 1
    while complete_x(hi) < x:
        hi *= 2
    lo = 0
    while lo < hi:
        mid = (lo + hi) // 2
        if complete_x(mid) >= x:
            hi = mid
        else:
            lo = mid + 1
    return lo


def complete_x(m_max: int) -> int:
    """Largest x for which enumerating m <= m_max sees every field with D <= x."""
    # D = M^3 / divisor grows with m inside a 2-adic class, so the cheapest
    # unseen field is the first m > m_max of some class
    start = max(m_max, 0) + 1
    firsts = [start + (t - start) % s for t, s in ((1, 2), (2, 4), (4, 8), (0, 8))]
    return min((m * m + 16) ** 3 // CLASS_DISC_DIVISOR[residue_class(m)] for m in firsts) - 1


def count_by_index(x: int) -> dict[int, int]:
    """N(x, i) for i in {1, 2, 3, 4, 6, 12}, boundary inclusive."""
    if x < 1:
        return dict.fromkeys(ENGSTROM_INDICES, 0)
    return counts_at(process_range(1, m_bound_for_x(x)), x)


def paper_constant(i: int, truncation: int = 10**6) -> float:
    """C_1 or C_2 with the Euler product truncated at ``truncation``."""
    if i == 1:
        pre = C1_PREFACTOR
    elif i == 2:
        pre = C2_PREFACTOR
    else:
        raise UnsupportedIndex(f"no asymptotic constant for index {i}")
    return pre * euler_product_p1mod4(truncation).value


def empirical_constant(count: int, x: int) -> float:
    """N(x, i) / x^(1/6); presentation only."""
    if count == 0:
        return 0.0
    return count / x ** (1 / 6)


def squarefree_density(residue: str, m_max: int) -> float:
    """Fraction of m <= m_max in the class whose m^2 + 16 passes the filter."""
    if residue not in CLASSES:
        raise ValueError(f"unknown class {residue!r}; expected one of {CLASSES}")
    mask = squarefree_mask(1, m_max)
    total = passed = 0
    for m in range(1, m_max + 1):
        if residue_class(m) != residue:
            continue
        total += 1
        if mask[m - 1] and not is_perfect_square(m * m + 16):
            passed += 1
    return passed / total if total else 0.0


# -- report -----------------------------------------------------------------


@dataclass
class CensusConfig:
    m_max: int | None = None
    x_max: int | None = None
    euler_truncation: int = 10**6
    checkpoint_stride: int = 100_000
    workers: int = 1
    seed: int = 0
    checkpoint_dir: str | None = None

    def __post_init__(self):
        if self.m_max is not None and self.m_max < 0:
            raise ValueError(f"m_max must be >= 0, got {self.m_max}")
        if self.euler_truncation < 5:
            raise ValueError(f"euler_truncation must be >= 5, got {self.euler_truncation}")
        if self.checkpoint_stride < 1 or self.workers < 1:
            raise ValueError("checkpoint stride and worker count must be positive")

    def resolved_m_max(self) -> int:
        if self.m_max is not None:
            return self.m_max
        if self.x_max is not None:
            return m_bound_for_x(self.x_max)
        raise ValueError("CensusConfig needs m_max or x_max")

    def echo(self) -> dict:
        return {
            "m_max": self.m_max,
            "x_max": self.x_max,
            "euler_truncation": self.euler_truncation,
            "checkpoint_stride": self.checkpoint_stride,
            "seed": self.seed,
        }


@dataclass
class CensusReport:
    config: dict
    m_max: int
    x_complete: int
    rows: list
    class_index: dict
    cid3_by_residue: dict
    densities: dict
    class_totals: dict
    rejected: dict
    falsifications: list
    eq1_checked: int
    euler_value: float
    euler_tail: float
    constants: dict
    class_constants: dict
    stabilization: dict
    flags: list

    @property
    def other_indices_absent(self) -> bool:
        return all(r["N_other"] == 0 for r in self.rows) and not self.falsifications

    def to_json(self) -> str:
        fmt = lambda v: f"{v:.{CONSTANT_DIGITS}g}"  # noqa: E731
        doc = {
            "config": self.config,
            "m_max": self.m_max,
            "x_complete": str(self.x_complete),
            "constant_precision": f"{CONSTANT_DIGITS} significant digits",
            "euler_product": {"value": fmt(self.euler_value), "relative_tail_bound": fmt(self.euler_tail)},
            "closed_form_constants": {k: fmt(v) for k, v in self.constants.items()},
            "class_constants_from_density": {c: fmt(v) for c, v in self.class_constants.items()},
            "class_index": self.class_index,
            "cid3_by_residue": {str(k): v for k, v in self.cid3_by_residue.items()},
            "rows": [
                {
                    "x": str(r["x"]),
                    "counts": {str(i): str(n) for i, n in r["counts"].items()},
                    "class_counts": {c: str(n) for c, n in r["class_counts"].items()},
                    "c1_emp": fmt(r["c1_emp"]),
                    "c2_emp": fmt(r["c2_emp"]),
                    "c_total_emp": fmt(r["c_total_emp"]),
                    "class_emp": {c: fmt(v) for c, v in r["class_emp"].items()},
                }
                for r in self.rows
            ],
            "densities": {c: fmt(v) for c, v in self.densities.items()},
            "class_totals": {c: {k: str(v) for k, v in d.items()} for c, d in self.class_totals.items()},
            "rejected": {k: str(v) for k, v in self.rejected.items()},
            "eq1_checked": str(self.eq1_checked),
            "falsifications": [{"m": str(m), "reason": why} for m, why in self.falsifications],
            "other_indices_absent": self.other_indices_absent,
            "stabilization": {k: fmt(v) if isinstance(v, float) else v for k, v in self.stabilization.items()},
            "flags": self.flags,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "N1", "N2", "N_other", "c1_emp", "c2_emp"])
        for r in self.rows:
            w.writerow([r["x"], r["counts"][1], r["counts"][2], r["N_other"],
                        f"{r['c1_emp']:.{CONSTANT_DIGITS}g}", f"{r['c2_emp']:.{CONSTANT_DIGITS}g}"])
        return buf.getvalue()

    def summary(self) -> str:
        lines = [f"census m <= {self.m_max}, complete for D <= {self.x_complete}"]
        for r in self.rows[-3:]:
            lines.append(
                f"  x={r['x']}: N1={r['counts'][1]} N2={r['counts'][2]} other={r['N_other']}"
                f"  c1={r['c1_emp']:.6f} c2={r['c2_emp']:.6f}"
            )
        lines.append(f"  closed form C1={self.constants['C1']:.6f} C2={self.constants['C2']:.6f}")
        lines.extend(f"  FLAG: {f}" for f in self.flags)
        return "\n".join(lines)


def chunks(m_max: int, stride: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + stride - 1, m_max)) for lo in range(1, m_max + 1, stride)]


def run_partials(m_max: int, stride: int, workers: int = 1, checkpoint_dir=None) -> CensusPartial:
    jobs = [(lo, hi, checkpoint_dir) for lo, hi in chunks(m_max, stride)]
    if checkpoint_dir is not None:
        Path(checkpoint_dir).mkdir(parents=True, exist_ok=True)
    total = CensusPartial()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_run_chunk, jobs):
                total = total.merge(part)
    else:
        for job in jobs:
            total = total.merge(_run_chunk(job))
    return total


def x_ladder(smallest: int, x_top: int) -> list[int]:
    out, x = [], smallest
    while x <= x_top:
        out.append(x)
        x *= 2
    return out


def finalize(part: CensusPartial, config: CensusConfig, m_max: int) -> CensusReport:
    class_index = index_by_class()
    euler = euler_product_p1mod4(config.euler_truncation)
    constants = {
        "C1": C1_PREFACTOR * euler.value,
        "C2": C2_PREFACTOR * euler.value,
        "C_total": TOTAL_PREFACTOR * euler.value,
    }
    x_top = complete_x(m_max)
    if config.x_max is not None:
        x_top = min(x_top, config.x_max)
    all_discs = [d[0] for d in part.discs.values() if d]
    ladder = x_ladder(min(all_discs), x_top) if all_discs else []
    if config.x_max is not None and ladder and ladder[-1] != x_top:
        ladder.append(x_top)
    rows = []
    for x in ladder:
        counts = counts_at(part, x, class_index)
        cc = class_counts_at(part, x)
        rows.append({
            "x": x,
            "counts": counts,
            "N_other": sum(n for i, n in counts.items() if i not in (1, 2)),
            "class_counts": cc,
            "c1_emp": empirical_constant(counts[1], x),
            "c2_emp": empirical_constant(counts[2], x),
            "c_total_emp": empirical_constant(sum(counts.values()), x),
            "class_emp": {c: empirical_constant(n, x) for c, n in cc.items()},
        })
    densities = {
        c: (part.class_pass[c] / part.class_total[c] if part.class_total[c] else 0.0) for c in CLASSES
    }
    stabilization: dict = {}
    flags = []
    if rows:
        top = rows[-1]
        lower = [r for r in rows if 10 * r["x"] <= top["x"]]
        if lower:
            dec = lower[-1]
            stabilization["x_top"] = str(top["x"])
            stabilization["x_decade"] = str(dec["x"])
            for key in ("c1_emp", "c2_emp"):
                a, b = top[key], dec[key]
                stabilization[key + "_rel_change"] = abs(a - b) / a if a else 0.0
        for key, name in (("c1_emp", "C1"), ("c2_emp", "C2"), ("c_total_emp", "C_total")):
            emp, ref = top[key], constants[name]
            dev = abs(emp - ref) / ref
            stabilization[name + "_rel_deviation"] = dev
            if dev > DEVIATION_FLAG:
                flags.append(
                    f"DEVIATION > 5%: empirical {key[:-4]}={emp:.6f} vs closed form {name}={ref:.6f}"
                    f" (relative {dev:.3f}) at x={top['x']}"
                )
        for r in rows:
            if r["N_other"]:
                flags.append(f"FALSIFICATION: N(x, i) > 0 for i not in (1, 2) at x={r['x']}")
    for m, why in part.falsifications:
        flags.append(f"FALSIFICATION at m={m}: {why}")
    odd_gap = abs(densities["odd"] - euler.value) / euler.value if part.class_total["odd"] else 0.0
    stabilization["odd_density_rel_gap"] = odd_gap
    return CensusReport(
        config=config.echo(),
        m_max=m_max,
        x_complete=complete_x(m_max),
        rows=rows,
        class_index=class_index,
        cid3_by_residue=cid3_by_residue(),
        densities=densities,
        class_totals={c: {"total": part.class_total[c], "passed": part.class_pass[c]} for c in CLASSES},
        rejected=dict(part.rejected),
        falsifications=list(part.falsifications),
        eq1_checked=part.eq1_checked,
        euler_value=euler.value,
        euler_tail=euler.tail_bound,
        constants=constants,
        class_constants={
            c: CLASS_SHARE[c] * euler.value * CLASS_DISC_DIVISOR[c] ** (1 / 6) for c in CLASSES
        },
        stabilization=stabilization,
        flags=flags,
    )


def build_report(config: CensusConfig) -> CensusReport:
    m_max = config.resolved_m_max()
    part = run_partials(m_max, config.checkpoint_stride, config.workers, config.checkpoint_dir)
    return finalize(part, config, m_max)
