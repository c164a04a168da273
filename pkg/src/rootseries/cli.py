"""Command-line entry point: ``rootseries <command> [options]``.

Every command builds a Report of named checks and writes it as JSON or
CSV.  The exit status is 0 when every check passes, 1 when a check
fails and 2 on bad input or a numeric failure.
"""

from __future__ import annotations

import argparse
import random
import sys
import time

from .combinatorics import multi_indices
from .gkz import (
    GkzConfig,
    main_formula_coeff,
    recovery_formula_coeff,
    x_series_coeff,
)
from .identities import identity_suite
from .report import Check, Report, random_rational
from .roots import (
    BranchError,
    ProblemSpec,
    RecursionOracle,
    alpha_branch,
    coeff_closed,
    expected_alpha_exp,
    formula_forms_agree,
    residual_check,
    taylor_table,
)
from .scalars import parse_complex, parse_fraction
from .validation import MAX_DEGREE, MAX_ORDER, MAX_SET_SIZE, BoundsError, check_bound


def parse_scalar(text: str):
    """``p/q`` gives an exact rational; ``re,im`` or a decimal gives a complex float."""
    if "," in text or "." in text or "e" in text.lower() or "j" in text:
        return parse_complex(text)
    return parse_fraction(text)


def _spec_from_args(args) -> ProblemSpec:
    return ProblemSpec(parse_scalar(args.b), parse_scalar(args.beta),
                       tuple(parse_scalar(g) for g in args.gamma), args.branch)


def _random_spec(rng: random.Random, d: int) -> ProblemSpec:
    return ProblemSpec(random_rational(rng), random_rational(rng),
                       tuple(random_rational(rng) for _ in range(d)))


def _multi_index_name(n) -> str:
    return "(" + ",".join(str(x) for x in n) + ")"


def cmd_expand(args) -> Report:
    spec = _spec_from_args(args)
    K = check_bound("K", args.K, MAX_ORDER, args.unsafe)
    table = taylor_table(spec, K, normalized=args.normalized)
    checks = []
    for n, c in table:
        if sum(n):
            want = expected_alpha_exp(n, spec)
            checks.append(Check(f"alpha_exp{_multi_index_name(n)}", c.alpha_exp == want,
                                inputs={"multi_index": list(n)}, expected=want, actual=c.alpha_exp))
    payload = {"spec": spec.to_json(), "K": K, "normalized": args.normalized, "table": table.to_json()}
    try:
        payload["alpha"] = alpha_branch(spec).to_json()
    except (BranchError, ValueError, OverflowError):
        payload["alpha"] = None
    return Report("expand", checks, payload)


def cmd_oracle(args) -> Report:
    K = check_bound("K", args.K, 6 if not args.unsafe else MAX_ORDER, args.unsafe, minimum=1)
    if args.b is not None:
        specs = [_spec_from_args(args)]
    else:
        rng = random.Random(args.seed)
        specs = [_random_spec(rng, args.d) for _ in range(args.trials)]
    checks = []
    for idx, spec in enumerate(specs):
        oracle = RecursionOracle(spec)
        for order in range(1, K + 1):
            for n in multi_indices(spec.d, order):
                closed = coeff_closed(n, spec)
                I = [i + 1 for i, c in enumerate(n) for _ in range(c)]
                rec = oracle.partial(I)
                name = f"spec{idx:02d}{_multi_index_name(n)}"
                same = closed.coeff == rec.coeff and closed.alpha_exp == rec.alpha_exp
                checks.append(Check(f"closed_vs_recursion:{name}", same,
                                    inputs={"spec": spec.to_json(), "multi_index": list(n)},
                                    expected=closed.to_json(), actual=rec.to_json()))
                checks.append(Check(f"formula_forms:{name}", formula_forms_agree(n, spec),
                                    inputs={"spec": spec.to_json(), "multi_index": list(n)}))
    return Report("oracle", checks, {"specs": [s.to_json() for s in specs], "K": K})


def cmd_residual(args) -> Report:
    spec = _spec_from_args(args)
    K = check_bound("K", args.K, MAX_ORDER, args.unsafe)
    a = [parse_complex(x) for x in args.a] if args.a else [1e-2] * spec.d
    if len(a) != spec.d:
        raise ValueError(f"--a needs {spec.d} values, got {len(a)}")
    branch = alpha_branch(spec)
    res = residual_check(spec, K, a, scales=args.scales, branch=branch)
    check = Check("residual_slope", res.passed, inputs={"K": K, "a": a, "scales": args.scales},
                  expected=f">= {K + 1} - 0.2", actual=res.slope)
    return Report("residual", [check], {"spec": spec.to_json(), "alpha": branch.to_json(), **res.to_json()})


def cmd_identities(args) -> Report:
    N = check_bound("N", args.N, MAX_SET_SIZE, args.unsafe, minimum=1)
    return Report("identities", identity_suite(args.seed, smax=N), {"seed": args.seed, "N": N})


def _configs(args) -> list:
    n = check_bound("n", args.n, MAX_DEGREE, args.unsafe, minimum=2)
    if args.i1 is not None and args.i2 is not None:
        return [GkzConfig(n, args.i1, args.i2)]
    if args.i1 is not None or args.i2 is not None:
        raise ValueError("give both --i1 and --i2, or neither to sweep every pair")
    return [GkzConfig(n, i1, i2) for i1 in range(n + 1) for i2 in range(i1 + 1, n + 1)]


def cmd_bracket(args) -> Report:
    D = check_bound("D", args.D, MAX_ORDER, args.unsafe)
    checks, terms = [], []
    for cfg in _configs(args):
        for order in range(1, D + 1):
            for nf in multi_indices(len(cfg.free), order):
                x = x_series_coeff(nf, cfg)
                r = recovery_formula_coeff(nf, cfg)
                name = f"bracket(i1={cfg.i1},i2={cfg.i2}){_multi_index_name(nf)}"
                checks.append(Check(name, x == r, inputs={"config": cfg.to_json(), "n_free": list(nf)},
                                    expected=r.to_json(), actual=x.to_json()))
                terms.append({"config": cfg.to_json(), "term": list(nf), "bracket_series": x.to_json(),
                              "closed_formula": r.to_json(), "agree": x == r})
    return Report("bracket", checks, {"D": D, "terms": terms})


def cmd_recover(args) -> Report:
    D = check_bound("D", args.D, MAX_ORDER, args.unsafe)
    checks = []
    for cfg in _configs(args):
        for order in range(1, D + 1):
            for nf in multi_indices(len(cfg.free), order):
                r = recovery_formula_coeff(nf, cfg)
                m = main_formula_coeff(nf, cfg)
                name = f"recover(i1={cfg.i1},i2={cfg.i2}){_multi_index_name(nf)}"
                checks.append(Check(name, r == m, inputs={"config": cfg.to_json(), "n_free": list(nf)},
                                    expected=r.to_json(), actual=m.to_json()))
    return Report("recover", checks, {"D": D})


COMMANDS = {
    "expand": cmd_expand,
    "oracle": cmd_oracle,
    "residual": cmd_residual,
    "identities": cmd_identities,
    "bracket": cmd_bracket,
    "recover": cmd_recover,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write the report here instead of standard output")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--unsafe", action="store_true", help="lift the desk-scale size limits")
    common.add_argument("--timing", action="store_true", help="record wall time (breaks byte-identical output)")

    spec = argparse.ArgumentParser(add_help=False)
    spec.add_argument("--b", help="coefficient b as p/q, or re,im for a complex float")
    spec.add_argument("--beta", default="2", help="exponent beta (default 2)")
    spec.add_argument("--gamma", nargs="+", default=["1"], help="perturbation exponents")
    spec.add_argument("--branch", type=int, default=0, help="branch index m of alpha")
    spec.add_argument("--K", type=int, default=4, help="maximum total order")

    gkz = argparse.ArgumentParser(add_help=False)
    gkz.add_argument("--n", type=int, default=2, help="polynomial degree")
    gkz.add_argument("--i1", type=int)
    gkz.add_argument("--i2", type=int)
    gkz.add_argument("--D", type=int, default=4, help="maximum total degree in the free coefficients")

    parser = argparse.ArgumentParser(prog="rootseries", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[common, spec], help="closed-form Taylor table")
    p.add_argument("--normalized", action="store_true", help="divide by prod n_i! (Taylor coefficients)")

    p = sub.add_parser("oracle", parents=[common, spec], help="closed form vs recursion oracle")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--d", type=int, default=2, help="number of perturbations for random specs")
    p.add_argument("--trials", type=int, default=5, help="random specs when --b is not given")

    p = sub.add_parser("residual", parents=[common, spec], help="residual scaling of the truncated series")
    p.add_argument("--a", nargs="+", help="perturbation point, one re,im per exponent (default 1e-2 each)")
    p.add_argument("--scales", type=float, nargs="+", default=[1.0, 0.5, 0.25, 0.125])

    p = sub.add_parser("identities", parents=[common], help="Stirling, partition and derivation identities")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--N", type=int, default=3, help="largest set size in the marked-partition identity")

    sub.add_parser("bracket", parents=[common, gkz], help="bracket series vs closed recovery formula")
    sub.add_parser("recover", parents=[common, gkz], help="closed recovery formula vs root-series formula")
    return parser


def run(args) -> Report:
    if args.command in ("expand", "residual") and args.b is None:
        raise ValueError(f"{args.command} needs --b")
    start = time.perf_counter()
    report = COMMANDS[args.command](args)
    if args.timing:
        report.wall_time = time.perf_counter() - start
    return report


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = run(args)
    except (ValueError, ZeroDivisionError, BoundsError, BranchError, TypeError, ArithmeticError) as exc:
        print(f"rootseries {args.command}: error: {exc}", file=sys.stderr)
        return 2
    text = report.dumps(args.format)
    s = report.summary()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"{args.command}: {s['passed']}/{s['total']} checks passed -> {args.output}")
    else:
        sys.stdout.write(text)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
