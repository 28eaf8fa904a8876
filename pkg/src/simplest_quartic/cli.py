"""Command-line entry point: info | factor | verify | census.

Exit codes: 0 success, 1 usage error, 2 invalid m, 3 verification failure,
4 capacity exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .census import CensusConfig, build_report
from .errors import CapacityExceeded, ExcludedM, NotSquarefree, VerificationFailed
from .quartic_field import build
from .splitting import factor_prime, oracle_factor_two, verify_factorization
from .verification import BATTERIES, run_battery

EXIT_OK, EXIT_USAGE, EXIT_INVALID_M, EXIT_VERIFY, EXIT_CAPACITY = 0, 1, 2, 3, 4
WORKERS_ENV = "SIMPLEST_QUARTIC_WORKERS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def read_config(path: str) -> dict[str, str]:
    """key = value lines; '#' starts a comment; keys mirror long flags."""
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"bad config line: {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.lstrip("-").replace("-", "_")] = value
    return out


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="simplest-quartic", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key = value file mirroring the long flags")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("info", help="invariants of K_m")
    p.add_argument("m", type=int)

    p = sub.add_parser("factor", help="prime-ideal factorization of p in K_m")
    p.add_argument("m", type=int)
    p.add_argument("p", type=int)
    p.add_argument("--verify", action="store_true", help="certify against the oracle")
    p.add_argument("--oracle", action="store_true", help="also print the oracle's own splitting of 2")

    p = sub.add_parser("verify", help="run the verification batteries")
    p.add_argument("--m-max", type=int, default=500)
    p.add_argument("--p-max", type=int, default=50)
    p.add_argument("--workers", type=int, default=_default_workers())
    p.add_argument("--battery", action="append", choices=BATTERIES,
                   help="restrict to one battery (repeatable)")

    p = sub.add_parser("census", help="count fields by discriminant and index")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--m-max", type=int)
    group.add_argument("--x-max", type=int)
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--workers", type=int, default=_default_workers())
    p.add_argument("--euler-truncation", type=int, default=10**6)
    p.add_argument("--stride", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--checkpoint-dir")
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    cfg = read_config(known.config)
    for action in parser._subparsers._group_actions:  # noqa: SLF001
        for sp in action.choices.values():
            dests = {a.dest for a in sp._actions}  # noqa: SLF001
            typed = {}
            for key, value in cfg.items():
                if key not in dests:
                    continue
                act = next(a for a in sp._actions if a.dest == key)  # noqa: SLF001
                if isinstance(act, argparse._StoreTrueAction):  # noqa: SLF001
                    typed[key] = value.lower() in ("1", "true", "yes", "on")
                elif act.type is not None:
                    typed[key] = act.type(value)
                else:
                    typed[key] = value
            sp.set_defaults(**typed)


def cmd_info(args, out) -> int:
    fp = build(args.m)
    print(f"m = {fp.m}", file=out)
    print(f"m^2+16 = {fp.M}", file=out)
    print(f"odd part of m^2+16 = {fp.M_odd}", file=out)
    print(f"v2(m) = {fp.v2m}", file=out)
    print(f"I(theta) = {fp.theta_index}", file=out)
    print(f"I(K) = {fp.field_index}", file=out)
    print(f"disc(P_m) = {fp.poly_disc}", file=out)
    print(f"D(K) = {fp.field_disc}", file=out)
    return EXIT_OK


def _coords(a) -> str:
    body = ", ".join(str(c) for c in a.coeffs)
    return f"({body})" + (f"/{a.den}" if a.den != 1 else "")


def cmd_factor(args, out) -> int:
    fact = factor_prime(args.m, args.p)
    print(f"m={fact.m} p={fact.p} source={fact.source}", file=out)
    for k, pf in enumerate(fact.factors, 1):
        note = "" if pf.certified else "  [f implied, not certified]"
        print(f"  P{k} = <{pf.p}, {pf.generator}>  e={pf.e} f={pf.f}  coords={_coords(pf.generator)}{note}",
              file=out)
    print(f"  sum e*f = {fact.degree()}", file=out)
    if args.oracle and args.p == 2:
        print("oracle splitting of 2:", file=out)
        for k, pf in enumerate(oracle_factor_two(args.m).factors, 1):
            print(f"  Q{k} = <2, {pf.generator}>  e={pf.e} f={pf.f}", file=out)
    if args.verify:
        cert = verify_factorization(fact, strict=False)
        print(cert.render(), file=out)
        return EXIT_OK if cert.passed else EXIT_VERIFY
    return EXIT_OK


def cmd_verify(args, out) -> int:
    names = args.battery or list(BATTERIES)
    ok = True
    for name in names:
        res = run_battery(name, args.m_max, args.p_max, args.workers)
        print(res.line(), file=out)
        for m, p, detail in res.failures:
            print(f"  m={m} p={p}: {detail}", file=out)
        ok &= res.passed
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_census(args, out) -> int:
    config = CensusConfig(
        m_max=args.m_max,
        x_max=args.x_max,
        euler_truncation=args.euler_truncation,
        checkpoint_stride=args.stride,
        workers=args.workers,
        seed=args.seed,
        checkpoint_dir=args.checkpoint_dir,
    )
    if config.m_max is None and config.x_max is None:
        raise UsageError("census needs --m-max or --x-max")
    report = build_report(config)
    text = report.to_json() if args.format == "json" else report.to_csv()
    if args.out:
        Path(args.out).write_text(text)
        print(report.summary(), file=out)
    else:
        out.write(text)
    return EXIT_OK


COMMANDS = {"info": cmd_info, "factor": cmd_factor, "verify": cmd_verify, "census": cmd_census}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = make_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ExcludedM, NotSquarefree) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INVALID_M
    except VerificationFailed as exc:
        print(f"verification failed: {exc.reason}", file=sys.stderr)
        return EXIT_VERIFY
    except CapacityExceeded as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
