"""Command-line front end: algebraic one-shots and verification campaigns.

Every subcommand writes a single JSON document to standard output (and to
--output when given).  Reports are rendered with sorted keys and no ambient
state, so identical (command, seed, arguments) invocations are byte-identical.

Exit codes: 0 pass/certified, 1 fail/refuted, 2 usage error or inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import scalars
from .convexity import (SamplerConfig, check_ext_one_affine, check_ext_one_convex,
                        fit_quasiaffine, polyconvex_support_lp)
from .errors import DomainError
from .exterior import KForm, wedge_power
from .functions import FormFunction
from .projection import project, wedge_power_from_minors
from .sampling import derive_rng, random_integer_matrix
from .shapespace import ShapeMatrix, adjugate

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _emit(report: dict, output: str | None) -> None:
    text = json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"
    sys.stdout.write(text)
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)


def _sampler_config(args) -> SamplerConfig:
    return SamplerConfig(seed=args.seed, trials=args.trials,
                         coeff_range=args.range, step=args.step,
                         tolerance=args.tolerance)


def cmd_pi(args) -> int:
    X = ShapeMatrix.from_json(_load_json(args.input), args.backend)
    _emit(project(X).to_json(), args.output)
    return EXIT_PASS


def cmd_adjugate(args) -> int:
    X = ShapeMatrix.from_json(_load_json(args.input), args.backend)
    _emit(adjugate(X, args.s).to_json(), args.output)
    return EXIT_PASS


def cmd_wedge_power(args) -> int:
    x = KForm.from_json(_load_json(args.input), args.backend)
    _emit(wedge_power(x, args.s).to_json(), args.output)
    return EXIT_PASS


def cmd_verify_formula(args) -> int:
    """Exact comparison of the wedge power against its minor-table expansion."""
    n, k, s = args.n, args.k, args.s
    report = {"config": {"n": n, "k": k, "s": s}, "trials": args.trials,
              "seed": args.seed, "entry_range": [args.low, args.high]}
    worst = 0
    failure = None
    for trial in range(args.trials):
        rng = derive_rng(args.seed, trial)
        X = random_integer_matrix(n, k, rng, args.low, args.high)
        direct = wedge_power(project(X), s)
        via_minors = wedge_power_from_minors(
            X, s, _flip_one_sign=args.inject_fault and trial == 0)
        residual = max((abs(a - b) for a, b in zip(direct.coeffs, via_minors.coeffs)),
                       default=0)
        if residual > worst:
            worst = residual
        if residual != 0 and failure is None:
            failure = {"n": n, "k": k, "s": s, "seed": args.seed, "trial": trial}
    report["max_residual"] = scalars.format_rational(worst)
    report["status"] = "pass" if worst == 0 else "fail"
    if failure is not None:
        report["failure"] = failure
    _emit(report, args.output)
    return EXIT_PASS if worst == 0 else EXIT_FAIL


def _run_convexity_mode(fn: FormFunction, mode: str, args) -> tuple[dict, int]:
    cfg = _sampler_config(args)
    if mode in ("one-convex", "one-affine"):
        check = check_ext_one_convex if mode == "one-convex" else check_ext_one_affine
        verdict = check(fn, cfg)
        return verdict.to_json(), EXIT_PASS if verdict.status == "pass" else EXIT_FAIL
    if mode == "quasiaffine-fit":
        fit = fit_quasiaffine(fn, cfg)
        report = fit.to_json()
        report["fit_tolerance"] = args.fit_tolerance
        if fit.status != "ok":
            return report, EXIT_ERROR
        ok = fit.validation_residual <= args.fit_tolerance
        report["status"] = "ok" if ok else "rejected"
        return report, EXIT_PASS if ok else EXIT_FAIL
    if mode == "poly-lp":
        if args.base:
            base = KForm.from_json(_load_json(args.base), scalars.FLOAT)
        else:
            base = KForm.zero(fn.n, fn.k, scalars.FLOAT)
        search = polyconvex_support_lp(fn, base, cfg)
        codes = {"certified": EXIT_PASS, "refuted": EXIT_FAIL,
                 "inconclusive": EXIT_ERROR}
        return search.to_json(), codes[search.status]
    raise DomainError(f"unknown convexity mode {mode!r}")


def cmd_check_convexity(args) -> int:
    fn = FormFunction.from_json(_load_json(args.input))
    report, code = _run_convexity_mode(fn, args.mode, args)
    _emit(report, args.output)
    return code


def cmd_fit_quasiaffine(args) -> int:
    fn = FormFunction.from_json(_load_json(args.input))
    report, code = _run_convexity_mode(fn, "quasiaffine-fit", args)
    _emit(report, args.output)
    return code


def cmd_support_lp(args) -> int:
    fn = FormFunction.from_json(_load_json(args.input))
    report, code = _run_convexity_mode(fn, "poly-lp", args)
    _emit(report, args.output)
    return code


def _add_io_flags(parser, backend: bool = True) -> None:
    parser.add_argument("--input", required=True, help="input JSON path")
    parser.add_argument("--output", help="also write the report to this path")
    if backend:
        parser.add_argument("--backend", choices=[scalars.EXACT, scalars.FLOAT],
                            default=None, help="override the inferred scalar backend")


def _add_sampler_flags(parser, trials: int = 100) -> None:
    parser.add_argument("--trials", type=int, default=trials)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--range", type=float, default=2.0,
                        help="coefficient sampling range")
    parser.add_argument("--step", type=float, default=1e-3,
                        help="second-difference step")
    parser.add_argument("--tolerance", type=float, default=1e-9)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="extconv",
        description="Exact projection/wedge-power identities and sampled "
                    "exterior-convexity checks with JSON I/O.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pi", help="project a shape matrix to a form")
    _add_io_flags(p)
    p.set_defaults(func=cmd_pi)

    p = sub.add_parser("adjugate", help="order-s minor table of a shape matrix")
    _add_io_flags(p)
    p.add_argument("--s", type=int, required=True)
    p.set_defaults(func=cmd_adjugate)

    p = sub.add_parser("wedge-power", help="s-th wedge power of a form")
    _add_io_flags(p)
    p.add_argument("--s", type=int, required=True)
    p.set_defaults(func=cmd_wedge_power)

    p = sub.add_parser("verify-formula",
                       help="exact wedge-power vs minor-expansion campaign")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--low", type=int, default=-5)
    p.add_argument("--high", type=int, default=5)
    p.add_argument("--output", help="also write the report to this path")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify_formula)

    p = sub.add_parser("check-convexity", help="sampled convexity verdicts")
    _add_io_flags(p, backend=False)
    p.add_argument("--mode", required=True,
                   choices=["one-convex", "one-affine", "quasiaffine-fit", "poly-lp"])
    _add_sampler_flags(p)
    p.add_argument("--base", help="base-point KForm JSON (poly-lp)")
    p.add_argument("--fit-tolerance", type=float, default=1e-8,
                   help="acceptance threshold on the fit validation residual")
    p.set_defaults(func=cmd_check_convexity)

    p = sub.add_parser("fit-quasiaffine", help="recover wedge-power pairing coefficients")
    _add_io_flags(p, backend=False)
    _add_sampler_flags(p, trials=200)
    p.add_argument("--fit-tolerance", type=float, default=1e-8)
    p.set_defaults(func=cmd_fit_quasiaffine)

    p = sub.add_parser("support-lp", help="supporting-coefficient LP search")
    _add_io_flags(p, backend=False)
    _add_sampler_flags(p, trials=500)
    p.add_argument("--base", help="base-point KForm JSON")
    p.set_defaults(func=cmd_support_lp)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, json.JSONDecodeError, KeyError, TypeError,
            FileNotFoundError) as exc:
        print(f"extconv: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
