"""Command-line entry point: ``hublocate <command> ...``.

Exit codes: 0 ok, 1 input error, 2 a violated inequality or metric check.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import bench as B
from .audit import ALPHA_GRID, random_audit_instance
from .errors import ConfigurationError, InputError
from .generate import FAMILIES, Family, generate
from .model import PHLP, PHM, UHLP, load_instance, validate_metric
from .oracle import EXACT_HLP_LIMIT, exact_hlp, export_ilp
from .reduction import build_bap, build_pa

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2


def _norm(text: str) -> float:
    return math.inf if text.lower() in ("inf", "infinity", "max") else float(text)


def _alphas(text: str) -> tuple[float, ...]:
    return tuple(float(a) for a in text.split(","))


def _emit(text: str, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _append_csv(text: str, out):
    """Append rows to ``out``, writing the header lines only for a new file."""
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    path = Path(out)
    if path.exists() and path.stat().st_size > 0:
        body = "".join(text.splitlines(keepends=True)[2:])
        with path.open("a", encoding="utf-8") as fh:
            fh.write(body)
    else:
        path.write_text(text, encoding="utf-8")


def _variant(args) -> str:
    if args.variant:
        return args.variant
    if args.p is not None and args.setup:
        return PHLP
    if args.setup:
        return UHLP
    return PHM


def _family(args):
    if args.family == "custom":
        if None in (args.tasks, args.branches, args.hubs):
            raise InputError("custom family needs --tasks, --branches and --hubs")
        return Family(args.tasks, args.branches, args.hubs)
    return args.family


def _add_instance_opts(sp, alpha_list=False):
    sp.add_argument("--family", default="small", choices=[*FAMILIES, "custom"])
    sp.add_argument("--tasks", type=int)
    sp.add_argument("--branches", type=int)
    sp.add_argument("--hubs", type=int)
    sp.add_argument("--variant", choices=[PHM, UHLP, PHLP])
    if alpha_list:
        sp.add_argument("--alpha", type=_alphas, default=(0.4, 0.8), help="comma-separated list")
    else:
        sp.add_argument("--alpha", type=float, default=0.4)
    sp.add_argument("--p", type=int)
    sp.add_argument("--setup", choices=["uniform", "set1"])
    sp.add_argument("--setup-scale", type=float, default=1.0)
    sp.add_argument("--norm", type=_norm, default=2.0)
    sp.add_argument("--seed", type=int, default=0)


def _add_solver_opts(sp):
    sp.add_argument("--flp", choices=["greedy", "exact"], default="greedy")
    sp.add_argument("--midpoint", choices=["metric", "vector"])
    sp.add_argument("--greedy-objective", choices=["total", "max"], default="total")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hublocate", description="Multi-allocation hub location solvers")
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("gen", help="generate a random instance")
    _add_instance_opts(sp)
    sp.add_argument("--out", default="-")

    sp = sub.add_parser("solve", help="solve an instance with PA and/or BaP")
    sp.add_argument("instance")
    sp.add_argument("--algo", choices=["pa", "bap", "both"], default="both")
    _add_solver_opts(sp)
    sp.add_argument("--timing", action="store_true", help="fill the wall_ms column")
    sp.add_argument("--out", default="-")

    sp = sub.add_parser("exact", help="solve an instance by hub-subset enumeration")
    sp.add_argument("instance")
    sp.add_argument("--limit", type=int, default=EXACT_HLP_LIMIT)
    sp.add_argument("--out", default="-")

    sp = sub.add_parser("audit", help="check every approximation inequality against the oracle")
    sp.add_argument("instance", nargs="*")
    sp.add_argument("--random", type=int, default=0, help="number of random oracle-scale instances")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-hubs", type=int, default=8)
    sp.add_argument("--max-branches", type=int, default=6)
    sp.add_argument("--max-tasks", type=int, default=10)
    sp.add_argument("--alpha", type=_alphas, default=ALPHA_GRID)
    sp.add_argument("--midpoint", choices=["metric", "vector"])
    sp.add_argument("--out", default="-")

    sp = sub.add_parser("bench", help="generate, solve and aggregate over seeds")
    _add_instance_opts(sp, alpha_list=True)
    _add_solver_opts(sp)
    sp.add_argument("--seeds", type=int, default=30)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out", default="-")

    sp = sub.add_parser("bounds", help="tabulate the guarantee curves for an FLP factor gamma")
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--points", type=int, default=100)
    sp.add_argument("--out", default="-")

    sp = sub.add_parser("validate-metric", help="check the triangle inequality")
    sp.add_argument("instance")
    sp.add_argument("--reduction", choices=["none", "pa", "bap"], default="none")
    sp.add_argument("--midpoint", choices=["metric", "vector"])
    sp.add_argument("--triples", type=int, default=0, help="sample this many triples instead of all")
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("export-ilp", help="write the instance's ILP in LP format")
    sp.add_argument("instance")
    sp.add_argument("--out", required=True)
    return ap


def cmd_gen(args):
    setup_mode = args.setup or "uniform"
    inst = generate(
        _family(args), _variant(args), alpha=args.alpha, norm_p=args.norm, seed=args.seed,
        p=args.p, setup_mode=setup_mode, setup_scale=args.setup_scale,
    )
    _emit(inst.to_json(), args.out)
    return EXIT_OK


def cmd_solve(args):
    inst = load_instance(args.instance)
    rows = B.solve_rows(inst, args.algo, args.flp, args.midpoint, args.greedy_objective, args.timing)
    _append_csv(B.write_csv(rows, B.SOLVE_FIELDS, "solve"), args.out)
    return EXIT_OK


def cmd_exact(args):
    inst = load_instance(args.instance)
    sol = exact_hlp(inst, limit=args.limit)
    rows = [B._sol_row(inst.name, "exact", "exact", sol, None)]
    _append_csv(B.write_csv(rows, B.SOLVE_FIELDS, "solve"), args.out)
    return EXIT_OK


def cmd_audit(args):
    instances = [load_instance(p) for p in args.instance]
    instances += [
        random_audit_instance(args.seed + i, args.max_hubs, args.max_branches, args.max_tasks)
        for i in range(args.random)
    ]
    if not instances:
        raise InputError("give instance files or --random N")
    modes = [args.midpoint] if args.midpoint else None
    rows, table = B.run_audit(instances, args.alpha, modes)
    _emit(B.write_csv(table, B.AUDIT_FIELDS, "audit"), args.out)
    bad = [r for r in rows if r.violations]
    for r in bad:
        print(f"violation: {r.instance} alpha={r.alpha} mode={r.mode}: {' '.join(r.violations)}", file=sys.stderr)
    print(f"audited {len(rows)} rows, {len(bad)} with violations", file=sys.stderr)
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_bench(args):
    variant = _variant(args)
    rows, summary = B.bench(
        _family(args), variant, args.alpha, p=args.p, setup_mode=args.setup or "uniform",
        setup_scale=args.setup_scale, norm=args.norm, seed=args.seed, n_seeds=args.seeds,
        jobs=args.jobs, flp=args.flp, mode=args.midpoint, greedy_objective=args.greedy_objective,
    )
    _emit(B.write_csv(rows, B.BENCH_FIELDS, "bench"), args.out)
    param = f"p={args.p}" if variant == PHM else f"setup={args.setup or 'uniform'}"
    print(f"{'instance':>8} {'param':>14} {'alpha':>5} {'BaP mean':>10} {'PA mean':>10} "
          f"{'BaP med':>10} {'PA med':>10} {'PA/BaP':>7}", file=sys.stderr)
    for alpha, st in summary:
        print(f"{args.family:>8} {param:>14} {alpha:>5} {st['BaP'][0]:>10.2f} {st['PA'][0]:>10.2f} "
              f"{st['BaP'][1]:>10.2f} {st['PA'][1]:>10.2f} {st['PA'][0] / st['BaP'][0]:>7.4f}", file=sys.stderr)
    return EXIT_OK


def cmd_bounds(args):
    if not args.gamma > 0:
        raise InputError("gamma must be positive")
    curves, g = B.bounds(args.gamma, args.points)
    _emit(B.write_csv(curves, B.BOUND_FIELDS, "bounds"), args.out)
    for name in ("bap", "pa", "combined"):
        a, v = g[name]
        print(f"{name:>8}: worst ratio {v:.4f} at alpha={a:.4f}", file=sys.stderr)
    return EXIT_OK


def cmd_validate(args):
    inst = load_instance(args.instance)
    if args.reduction == "none":
        fn, n = inst.dist, inst.n_vertices
    else:
        flp = build_pa(inst, args.midpoint) if args.reduction == "pa" else build_bap(inst)
        fn, n = flp.gamma, flp.n_nodes
    if args.triples:
        report = validate_metric(fn, n, "sampled", n_triples=args.triples, seed=args.seed)
    else:
        report = validate_metric(fn, n)
    print(f"checked {report.checked} triples: {len(report.violations)} violations, "
          f"max violation {report.max_violation:g}")
    for i, j, k, amount in report.violations[:20]:
        print(f"  d({i},{j}) + d({j},{k}) < d({i},{k}) by {amount:g}")
    return EXIT_VIOLATION if report.violations else EXIT_OK


def cmd_export(args):
    export_ilp(load_instance(args.instance), args.out)
    return EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "solve": cmd_solve,
    "exact": cmd_exact,
    "audit": cmd_audit,
    "bench": cmd_bench,
    "bounds": cmd_bounds,
    "validate-metric": cmd_validate,
    "export-ilp": cmd_export,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.cmd](args)
    except (InputError, ConfigurationError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
