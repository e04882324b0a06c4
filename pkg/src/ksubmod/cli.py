"""Command-line front end.

Exit status: 0 success, 1 a checked property or proof inequality failed,
2 usage, schema or cap errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import caps
from .exact import brute_force_opt
from .experiment import ExperimentConfig, run_experiment, to_csv
from .functions import SpecError
from .generators import GenerationError, gen_coverage, gen_signed_coverage
from .instance_io import SchemaError, dumps, load_instance
from .proofcheck import gen_rejection_instance, run_proofcheck
from .solver import SolverConfig, solve
from .verify import PROPERTIES, verify


class UsageError(Exception):
    pass


def _cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    cfg = SolverConfig(
        w=args.w,
        mode=args.mode,
        strict_paper=args.strict_paper,
        best_prefix=args.best_prefix,
        prefilter=args.prefilter,
        parallel=args.parallel,
    )
    rep = solve(inst, cfg)
    if args.json:
        print(json.dumps(rep.to_dict(timing=args.timing, ids=inst.ids), indent=2))
    else:
        print(rep.format(inst.ids, timing=args.timing))
    return 0


def _cmd_exact(args) -> int:
    inst = load_instance(args.instance)
    opt = brute_force_opt(inst, size=args.size)
    if args.json:
        print(json.dumps({
            "value": opt.value,
            "solution": list(opt.orthant.assignment),
            "solution_sets": inst.format(opt.orthant),
            "feasible_count": opt.feasible_count,
        }, indent=2))
    else:
        print(f"value:     {opt.value!r}")
        print(f"solution:  {inst.format(opt.orthant)}")
        print(f"feasible:  {opt.feasible_count} orthants")
    return 0


def _cmd_verify(args) -> int:
    inst = load_instance(args.instance)
    props = tuple(p.strip() for p in args.properties.split(",")) if args.properties else PROPERTIES
    for p in props:
        if p not in PROPERTIES:
            raise UsageError(f"unknown property {p!r}; choose from {', '.join(PROPERTIES)}")
    rep = verify(inst.spec, mode=args.mode, samples=args.samples, seed=args.seed, properties=props)
    if args.json:
        print(json.dumps(rep.to_dict(), indent=2))
    else:
        print(rep.format(inst.ids))
    return 1 if rep.any_failed() else 0


def _cmd_proofcheck(args) -> int:
    inst = load_instance(args.instance)
    monotone = {"monotone": True, "non-monotone": False, "auto": None}[args.mode]
    rep = run_proofcheck(inst, args.w, monotone=monotone)
    print(rep.format(inst.ids))
    return 0 if rep.passed else 1


def _cmd_gen(args) -> int:
    lo, hi = args.cost_range
    if args.family == "coverage":
        inst = gen_coverage(args.n, args.k, args.universe, (lo, hi), args.budget_rule, args.seed)
    elif args.family == "coverage-signed":
        inst = gen_signed_coverage(args.n, args.k, args.universe, (lo, hi), args.budget_rule, args.bonus, args.seed)
    else:
        inst = gen_rejection_instance(args.w, args.k, decoys=max(1, args.n - args.w - 1), seed=args.seed)
    text = dumps(inst)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_experiment(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    out = args.out or cfg.out
    if not out:
        raise UsageError("no output path: pass --out or set 'out' in the config")
    rows = run_experiment(cfg, parallel=args.parallel, timing=not args.no_timing)
    with open(out, "w") as fh:
        fh.write(to_csv(rows))
    print(f"wrote {len(rows)} rows to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ksubmod",
        description="k-submodular maximization under a knapsack constraint",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the partial-enumeration greedy")
    p.add_argument("--instance", required=True)
    p.add_argument("--w", type=int, default=None, help="enumeration depth (default 4 monotone, 7 otherwise)")
    p.add_argument("--mode", choices=("monotone", "non-monotone", "auto"), default="monotone")
    p.add_argument("--strict-paper", action="store_true", help="score only size w-1 solutions directly")
    p.add_argument("--best-prefix", action="store_true", help="also keep the best intermediate greedy state")
    p.add_argument("--prefilter", action="store_true", help="drop elements costing more than the budget")
    p.add_argument("--parallel", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical output)")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("exact", help="brute-force optimum")
    p.add_argument("--instance", required=True)
    p.add_argument("--size", type=int, default=None, help="restrict to supports of exactly this size")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("verify", help="check submodularity properties")
    p.add_argument("--instance", required=True)
    p.add_argument("--mode", choices=("exhaustive", "sample"), default="exhaustive")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--properties", default=None, help=f"comma list from {','.join(PROPERTIES)} (default all)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("proofcheck", help="evaluate the analysis inequalities on one instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--mode", choices=("monotone", "non-monotone", "auto"), default="auto")
    p.set_defaults(func=_cmd_proofcheck)

    p = sub.add_parser("gen", help="write a generated instance file")
    p.add_argument("--family", choices=("coverage", "coverage-signed", "rejection"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--universe", type=int, default=None, help="universe size (default 2n)")
    p.add_argument("--cost-range", type=int, nargs=2, default=(1, 5), metavar=("LO", "HI"))
    p.add_argument("--budget-rule", default="half", help="half, total, a fraction like 0.3, or an integer")
    p.add_argument("--bonus", type=float, default=1.0, help="bonus magnitude for coverage-signed")
    p.add_argument("--w", type=int, default=2, help="seed size targeted by the rejection family")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("experiment", help="run a grid and write a CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--parallel", type=int, default=1)
    p.add_argument("--no-timing", action="store_true", help="leave wall_ms empty for byte-stable output")
    p.set_defaults(func=_cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "universe", 0) is None:
        args.universe = 2 * args.n
    try:
        return args.func(args)
    except (UsageError, SchemaError, SpecError, caps.CapExceeded, GenerationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
