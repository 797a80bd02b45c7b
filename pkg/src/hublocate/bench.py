"""Solve/benchmark/audit drivers that produce CSV rows."""

from __future__ import annotations

import csv
import io
import statistics
import time
from concurrent.futures import ProcessPoolExecutor

from .audit import ALPHA_GRID, AuditRow, audit_many, bound_curves, guarantees
from .generate import generate
from .model import PHLP, PHM, UHLP, HlpInstance
from .oracle import exact_hlp
from .pipeline import solve_bap, solve_pa

CSV_VERSION = 1
SOLVE_FIELDS = ["instance", "algo", "flp", "objective", "transport", "setup", "open_hubs", "wall_ms"]
BENCH_FIELDS = [
    "row", "family", "variant", "p", "setup_mode", "setup_scale", "norm",
    "alpha", "seed", "algo", "objective", "transport", "setup", "n_open",
]
AUDIT_CHECKS = [
    "flp_opt", "pa_two_hub", "tour_two_hub", "pa_one_hub", "tour_one_hub", "bap_inv_alpha", "bap_one_hub",
    "combined", "opt_lower", "route_s1", "route_s2", "oracle_pa", "oracle_bap",
    "oracle_combined", "oracle_pa_greedy", "oracle_bap_greedy", "flp_greedy_pa", "flp_greedy_bap",
]
AUDIT_OBJECTIVES = [
    "exact", "flp_exact", "pa", "bap", "combined", "strategy1", "strategy2", "pa_greedy", "bap_greedy",
]


def fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return "" if x is None else str(x)


def write_csv(rows: list[dict], fields: list[str], header_tag: str) -> str:
    buf = io.StringIO()
    buf.write(f"# hublocate {header_tag} csv v{CSV_VERSION}\n")
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: fmt(r.get(k)) for k in fields})
    return buf.getvalue()


# -- solve ---------------------------------------------------------------------


def _sol_row(name, algo, flp, sol, wall_ms):
    return {
        "instance": name,
        "algo": algo,
        "flp": flp,
        "objective": sol.objective,
        "transport": sol.transport_cost,
        "setup": sol.setup_cost,
        "open_hubs": " ".join(str(h) for h in sol.open_hubs),
        "wall_ms": wall_ms,
    }


def solve_rows(inst: HlpInstance, algo="both", flp="greedy", mode=None, greedy_objective="total",
               timing=False) -> list[dict]:
    """One row per algorithm; ``algo="both"`` adds PA, BaP and their minimum."""
    kw = {"greedy_objective": greedy_objective}
    rows = []

    def run(label, fn):
        t0 = time.perf_counter()
        sol = fn()
        ms = round((time.perf_counter() - t0) * 1000.0, 3) if timing else None
        rows.append(_sol_row(inst.name, label, flp, sol, ms))
        return sol

    if algo in ("pa", "both"):
        pa = run("pa", lambda: solve_pa(inst, flp, mode, **kw))
    if algo in ("bap", "both"):
        bap = run("bap", lambda: solve_bap(inst, flp, **kw))
    if algo == "both":
        comb = pa if pa.objective <= bap.objective else bap
        rows.append(_sol_row(inst.name, "both", flp, comb, None))
    if algo == "exact":
        run("exact", lambda: exact_hlp(inst))
    if not rows:
        raise ValueError(f"unknown algorithm {algo!r}")
    return rows


# -- bench ---------------------------------------------------------------------


def _bench_job(args):
    cfg, seed, alpha = args
    inst = generate(
        cfg["family"], cfg["variant"], alpha=alpha, norm_p=cfg["norm"], seed=seed,
        p=cfg["p"], setup_mode=cfg["setup_mode"], setup_scale=cfg["setup_scale"],
    )
    out = []
    for algo, fn in (
        ("BaP", lambda: solve_bap(inst, cfg["flp"], greedy_objective=cfg["greedy_objective"])),
        ("PA", lambda: solve_pa(inst, cfg["flp"], cfg["mode"], greedy_objective=cfg["greedy_objective"])),
    ):
        sol = fn()
        out.append((alpha, seed, algo, sol.objective, sol.transport_cost, sol.setup_cost, len(sol.open_hubs)))
    return out


def bench(family="small", variant=PHM, alphas=(0.4, 0.8), p=None, setup_mode="uniform", setup_scale=1.0,
          norm=2.0, seed=0, n_seeds=30, jobs=1, flp="greedy", mode=None, greedy_objective="total"):
    """Per-seed rows followed by mean/median rows per (alpha, algorithm).

    Seeds are ``seed .. seed + n_seeds - 1``; one seed gives the same
    geometry and tasks for every alpha. Output does not depend on ``jobs``.
    """
    if n_seeds < 1:
        raise ValueError("n_seeds must be at least 1")
    cfg = dict(
        family=family, variant=variant, p=p, setup_mode=setup_mode, setup_scale=setup_scale, norm=norm,
        flp=flp, mode=mode, greedy_objective=greedy_objective,
    )
    work = [(cfg, s, a) for a in alphas for s in range(seed, seed + n_seeds)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_bench_job, work))
    else:
        results = [_bench_job(w) for w in work]
    flat = sorted(r for chunk in results for r in chunk)

    base = {
        "family": family if isinstance(family, str) else "custom",
        "variant": variant,
        "p": p,
        "setup_mode": setup_mode if variant in (UHLP, PHLP) else None,
        "setup_scale": setup_scale if variant in (UHLP, PHLP) else None,
        "norm": norm,
    }
    rows = []
    for alpha, s, algo, obj, tr, su, n_open in flat:
        rows.append({**base, "row": "seed", "alpha": alpha, "seed": s, "algo": algo,
                     "objective": obj, "transport": tr, "setup": su, "n_open": n_open})
    summary = []
    for alpha in alphas:
        stats = {}
        for algo in ("BaP", "PA"):
            vals = [r[3] for r in flat if r[0] == alpha and r[2] == algo]
            stats[algo] = (statistics.fmean(vals), statistics.median(vals))
            for i, stat in enumerate(("mean", "median")):
                rows.append({**base, "row": stat, "alpha": alpha, "algo": algo, "objective": stats[algo][i]})
        for i, stat in enumerate(("mean", "median")):
            rows.append({**base, "row": f"ratio_{stat}", "alpha": alpha, "algo": "PA/BaP",
                         "objective": stats["PA"][i] / stats["BaP"][i]})
        summary.append((alpha, stats))
    return rows, summary


# -- audit / bounds --------------------------------------------------------------


def audit_rows(rows: list[AuditRow]) -> list[dict]:
    out = []
    for r in rows:
        d = {
            "instance": r.instance, "variant": r.variant, "alpha": r.alpha, "mode": r.mode,
            "n_hubs": r.n_hubs, "n_tasks": r.n_tasks, "combined_ratio": r.combined_ratio,
            "violations": " ".join(r.violations),
        }
        d.update({f"obj_{k}": r.objectives.get(k) for k in AUDIT_OBJECTIVES})
        d.update({f"slack_{k}": r.slacks.get(k) for k in AUDIT_CHECKS})
        out.append(d)
    return out


AUDIT_FIELDS = (
    ["instance", "variant", "alpha", "mode", "n_hubs", "n_tasks"]
    + [f"obj_{k}" for k in AUDIT_OBJECTIVES]
    + ["combined_ratio"]
    + [f"slack_{k}" for k in AUDIT_CHECKS]
    + ["violations"]
)


def run_audit(instances, alphas=ALPHA_GRID, modes=None):
    rows = audit_many(instances, alphas, modes)
    return rows, audit_rows(rows)


BOUND_FIELDS = ["alpha", "bap1", "bap2", "pa1", "pa2", "combined"]


def bounds(gamma: float, points: int = 100):
    return bound_curves(gamma, points), guarantees(gamma)
