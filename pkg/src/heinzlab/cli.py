"""Command line interface: ``heinzlab {list, verify, suite, counterexample, sweep}``.

Exit codes: 0 when every verdict matches its registry expectation (FALSIFY-r0
is expected to be violated), 1 otherwise, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .chains import (
    COUNTEREXAMPLE_NU,
    PUBLISHED_DIGITS_TOL,
    PUBLISHED_LHS,
    PUBLISHED_RHS,
    REGISTRY,
    VIOLATED,
    counterexample_instance,
    evaluate_chain,
    falsify_r0_generalization,
    get_spec,
    list_theorems,
    sweep_F,
)
from .harness import DEFAULT_DIMS, DEFAULT_NORMS, SuiteConfig, emit_report, make_instance, run_suite, summarize
from .heinz import HeinzProfile
from .norms import parse_norm

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# flag -> chain parameter name
_PARAM_FLAGS = {
    "alpha": "alpha", "beta": "beta", "mu": "mu", "nu": "nu", "t": "t", "lam": "lam", "n": "n",
    "p": "p", "q": "q", "y": "y", "r": "r", "t_zhan": "t_zhan", "eta": "eta", "a": "a", "b": "b",
}


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _str_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:count`` (inclusive endpoints) or a comma list."""
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            count = int(count)
            if count < 1:
                raise ValueError
            return np.linspace(float(start), float(stop), count)
        return np.array([float(x) for x in text.split(",") if x.strip()])
    except ValueError:
        raise UsageError(f"bad grid {text!r}; use start:stop:count or a comma list") from None


def _kv(items: list[str]) -> dict:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--params expects key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heinzlab", description="Numerical checks of Heinz-type norm inequalities.")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list registered chains and their parameters")

    v = sub.add_parser("verify", help="evaluate one chain on a seeded instance")
    v.add_argument("theorem_id")
    for flag in _PARAM_FLAGS:
        v.add_argument(f"--{flag.replace('_', '-')}", dest=flag, type=float, default=None)
    v.add_argument("--params", nargs="*", default=[], metavar="KEY=VALUE", help="extra chain parameters")
    v.add_argument("--norm", default="tr")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--dim", type=int, default=4)
    v.add_argument("--tol", type=float, default=None, help="relative chain tolerance")
    v.add_argument("--json", action="store_true", help="print the report as JSON")

    s = sub.add_parser("suite", help="run chains over seeded random instances")
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--dims", type=_int_list, default=list(DEFAULT_DIMS))
    s.add_argument("--norms", type=_str_list, default=list(DEFAULT_NORMS))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--tol", type=float, default=None)
    s.add_argument("--out", default=None, help="report path ('-' for stdout)")
    s.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    s.add_argument("--theorems", type=_str_list, default=[])

    sub.add_parser("counterexample", help="reproduce the published counterexample")

    w = sub.add_parser("sweep", help="tabulate F(nu) as CSV")
    w.add_argument("--nu-grid", default="0:1:21")
    w.add_argument("--norm", default="tr")
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--dim", type=int, default=4)
    w.add_argument("--counterexample", action="store_true", help="use the published 3x3 instance")
    return parser


def _cmd_list(args) -> int:
    for entry in list_theorems():
        params = ", ".join(f"{p['name']} ({p['range']})" for p in entry["params"]) or "none"
        note = "  [expected: violated]" if entry["expect"] == VIOLATED else ""
        print(f"{entry['id']:<11} {entry['title']}{note}")
        print(f"{'':<11} params: {params}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    try:
        spec = get_spec(args.theorem_id)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    params = {_PARAM_FLAGS[f]: getattr(args, f) for f in _PARAM_FLAGS if getattr(args, f) is not None}
    params.update(_kv(args.params))
    subject = None
    if spec.subject in ("function", "matrix"):
        try:
            norm = parse_norm(args.norm)
            subject = HeinzProfile(make_instance(args.seed, args.dim, norm))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    try:
        report = evaluate_chain(spec.theorem_id, subject, params, rel_tol=args.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(json.dumps(report.to_dict(), indent=1) if args.json else report.describe())
    reproduced = report.verdict == VIOLATED
    return EXIT_OK if reproduced == (spec.expect == VIOLATED) else EXIT_FAIL


def _cmd_suite(args) -> int:
    try:
        cfg = SuiteConfig(
            trials=args.trials, dims=tuple(args.dims), norms=tuple(args.norms), seed=args.seed,
            tol_chain=args.tol, theorems=tuple(args.theorems), out=args.out, fmt=args.fmt,
        )
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc.args[0]) if exc.args else str(exc)) from None
    result = run_suite(cfg)
    if cfg.out == "-":
        sys.stdout.write(emit_report(result, cfg.fmt))
        print(summarize(result), file=sys.stderr)
    else:
        if cfg.out is not None:
            emit_report(result, cfg.fmt, cfg.out)
        print(summarize(result))
    return EXIT_OK if result.ok else EXIT_FAIL


def _cmd_counterexample(args) -> int:
    report = falsify_r0_generalization(nu=COUNTEREXAMPLE_NU)
    lhs, rhs = report.values
    d = report.diagnostics
    print(f"nu = {COUNTEREXAMPLE_NU}, trace norm")
    print(f"lhs  tr|A^nuXB^(1-nu)+A^(1-nu)XB^nu|     = {lhs:.6f}  (published {PUBLISHED_LHS}, "
          f"within +-{PUBLISHED_DIGITS_TOL}: {'yes' if d['lhs_within_published'] else 'no'})")
    print(f"rhs  tr|4r0 A^1/2XB^1/2+(1-2r0)(AX+XB)| = {rhs:.6f}  (published {PUBLISHED_RHS}, "
          f"within +-{PUBLISHED_DIGITS_TOL}: {'yes' if d['rhs_within_published'] else 'no'})")
    print(f"lhs - rhs = {lhs - rhs:.6f}")
    if report.verdict == VIOLATED:
        print("violation reproduced: lhs > rhs")
        return EXIT_OK
    print("violation NOT reproduced")
    return EXIT_FAIL


def _cmd_sweep(args) -> int:
    grid = parse_grid(args.nu_grid)
    try:
        if args.counterexample:
            profile = HeinzProfile(counterexample_instance(parse_norm(args.norm)))
        else:
            profile = HeinzProfile(make_instance(args.seed, args.dim, parse_norm(args.norm)))
        rows = sweep_F(profile, grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print("nu,F")
    for nu, value in rows:
        print(f"{nu:.17g},{value:.17g}")
    return EXIT_OK


_COMMANDS = {
    "list": _cmd_list,
    "verify": _cmd_verify,
    "suite": _cmd_suite,
    "counterexample": _cmd_counterexample,
    "sweep": _cmd_sweep,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"heinzlab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
