"""Empirical checks of the approximation inequalities against the exact oracle,
plus the closed-form guarantee curves."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .flp import exact_flp
from .generate import Family, generate
from .model import PHLP, PHM, UHLP, Coordinates, HlpInstance
from .oracle import EXACT_HLP_LIMIT, exact_hlp
from .pipeline import (
    default_solver,
    route_optimal,
    route_strategy1,
    route_strategy2,
    solve_reduced,
)
from .reduction import MidpointMode, build_bap, build_pa

SLACK_TOL = 1e-9
ALPHA_GRID = tuple(round(0.1 * i, 1) for i in range(1, 10))


# -- guarantee curves ---------------------------------------------------------


def bap1(alpha, gamma):
    return 1.0 / alpha


def bap2(alpha, gamma):
    return (1.0 + alpha) * gamma + alpha


def pa1(alpha, gamma):
    return gamma + 1.0 / ((1.0 + alpha) * alpha)


def pa2(alpha, gamma):
    return (1.0 + alpha) * gamma


def combined_bound(alpha, gamma):
    if alpha == 0:
        return pa2(alpha, gamma)
    return min(pa2(alpha, gamma), bap1(alpha, gamma))


def guarantees(gamma: float) -> dict[str, tuple[float, float]]:
    """Worst-case ratio over alpha in (0, 1] as ``(alpha, ratio)`` per algorithm.

    Each is the crossing of a decreasing and an increasing curve: BaP uses
    its two curves, PA its two, and the combination the PA two-hub curve
    against the BaP one-hub curve.
    """
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    # gamma a^2 + gamma a - 1 = 0
    a_comb = (-gamma + math.sqrt(gamma * gamma + 4.0 * gamma)) / (2.0 * gamma)
    a_bap = 1.0 / (gamma + 1.0)
    a_pa = brentq(lambda a: pa1(a, gamma) - pa2(a, gamma), 1e-12, 1.0, xtol=1e-15)
    return {
        "bap": (a_bap, bap1(a_bap, gamma)),
        "pa": (a_pa, pa2(a_pa, gamma)),
        "combined": (a_comb, pa2(a_comb, gamma)),
    }


def bound_curves(gamma: float, points: int = 100) -> list[dict]:
    rows = []
    for i in range(1, points + 1):
        a = i / points
        rows.append(
            {
                "alpha": a,
                "bap1": bap1(a, gamma),
                "bap2": bap2(a, gamma),
                "pa1": pa1(a, gamma),
                "pa2": pa2(a, gamma),
                "combined": combined_bound(a, gamma),
            }
        )
    return rows


# -- instance audit -----------------------------------------------------------


@dataclass
class AuditRow:
    instance: str
    variant: str
    alpha: float
    mode: str
    n_hubs: int
    n_tasks: int
    objectives: dict[str, float] = field(default_factory=dict)
    slacks: dict[str, float] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)

    @property
    def combined_ratio(self) -> float:
        opt = self.objectives["exact"]
        comb = self.objectives["combined"]
        if opt == 0:
            return 1.0 if comb == 0 else math.inf
        return comb / opt


def _check(row: AuditRow, name: str, slack: float, scale: float):
    row.slacks[name] = slack
    if slack < -SLACK_TOL * max(1.0, abs(scale)):
        row.violations.append(name)


def audit_instance(inst: HlpInstance, modes=None, limit: int = EXACT_HLP_LIMIT) -> list[AuditRow]:
    """Evaluate every inequality on one instance (its own alpha), one row per mid-point mode."""
    if modes is None:
        modes = [MidpointMode.METRIC]
        if isinstance(inst.geometry, Coordinates):
            modes.append(MidpointMode.VECTOR)
    a = inst.alpha
    opt = exact_hlp(inst, limit=limit)
    OPT = opt.objective
    t = np.asarray(inst.tasks, dtype=np.intp).reshape(-1, 2)
    direct = inst.dist[t[:, 0], t[:, 1]] if len(t) else np.zeros(0)

    bap_flp = build_bap(inst)
    bap_exact = solve_reduced(inst, bap_flp, "exact", limit=limit)
    bap_greedy = solve_reduced(inst, bap_flp, default_solver(inst, "greedy"))
    bap_greedy_flp = bap_greedy.flp

    rows = []
    for mode in modes:
        mode = MidpointMode.parse(mode)
        row = AuditRow(inst.name, inst.variant.kind, a, mode.value, len(inst.hubs), len(inst.tasks))
        flp = build_pa(inst, mode)
        G = flp.cost_matrix()
        fsol = exact_flp(flp, limit=limit, G=G)
        pa_exact = solve_reduced(inst, flp, "exact", limit=limit)
        pa_greedy = solve_reduced(inst, flp, default_solver(inst, "greedy"))
        combined = bap_exact if bap_exact.objective < pa_exact.objective else pa_exact
        s1 = route_strategy1(inst, flp, fsol)
        s2 = route_strategy2(inst, flp, fsol, G=G)
        has_tasks = len(inst.tasks) > 0
        best = route_optimal(inst, fsol.open_hubs(flp)) if has_tasks else None

        row.objectives.update(
            exact=OPT,
            flp_exact=fsol.objective,
            pa=pa_exact.objective,
            bap=bap_exact.objective,
            combined=combined.objective,
            strategy1=s1.transport_cost + fsol.setup_cost,
            strategy2=s2.transport_cost + fsol.setup_cost,
            pa_greedy=pa_greedy.objective,
            bap_greedy=bap_greedy.objective,
        )
        _check(row, "flp_opt", (1 + a) * OPT - fsol.objective, OPT)
        _check(row, "pa_two_hub", (1 + a) * OPT - pa_exact.objective, OPT)
        _check(row, "opt_lower", OPT - a * (direct.max() if has_tasks else 0.0), OPT)
        _check(row, "bap_one_hub", bap2(a, 1.0) * OPT - bap_exact.objective, OPT)
        if has_tasks:
            n = len(t)
            gsum = G[2 * np.arange(n), np.asarray(fsol.assignment[0::2])] + G[
                2 * np.arange(n) + 1, np.asarray(fsol.assignment[1::2])
            ]
            _check(row, "tour_two_hub", float((gsum - s1.task_costs).min()), OPT)
            _check(row, "route_s1", s1.transport_cost - best.transport_cost, OPT)
            _check(row, "route_s2", s2.transport_cost - best.transport_cost, OPT)
        if a > 0:
            _check(row, "pa_one_hub", pa1(a, 1.0) * OPT - row.objectives["strategy2"], OPT)
            _check(row, "bap_inv_alpha", bap1(a, 1.0) * OPT - bap_exact.objective, OPT)
            if has_tasks:
                lhs = (gsum + direct) / (1 + a)
                _check(row, "tour_one_hub", float((lhs - s2.task_costs).min()), OPT)
        _check(row, "combined", combined_bound(a, 1.0) * OPT - combined.objective, OPT)
        for name in ("pa", "bap", "combined", "pa_greedy", "bap_greedy"):
            _check(row, f"oracle_{name}", row.objectives[name] - OPT, OPT)
        _check(row, "flp_greedy_pa", pa_greedy.flp.objective - fsol.objective, fsol.objective)
        _check(
            row, "flp_greedy_bap", bap_greedy_flp.objective - bap_exact.flp.objective, bap_exact.flp.objective
        )
        # logged only: at alpha = 1 two hubs should never beat one
        if a == 1.0:
            row.slacks["alpha1_s1_minus_s2"] = s1.transport_cost - s2.transport_cost
        rows.append(row)
    return rows


def random_audit_instance(
    seed: int, max_hubs: int = 8, max_branches: int = 6, max_tasks: int = 10, alpha: float = 0.5
) -> HlpInstance:
    """Small random instance; sizes, variant and norm all follow from ``seed``."""
    rng = np.random.default_rng(seed)
    hubs = int(rng.integers(1, max_hubs + 1))
    branches = int(rng.integers(2, max_branches + 1))
    tasks = int(rng.integers(1, min(max_tasks, branches * (branches - 1)) + 1))
    variant = (PHM, UHLP, PHLP)[seed % 3]
    norm = (2.0, 1.0, math.inf, 3.0)[(seed // 3) % 4]
    p = int(rng.integers(1, hubs + 1)) if variant != UHLP else None
    inst = generate(Family(tasks, branches, hubs), variant, alpha=alpha, norm_p=norm, seed=seed, p=p)
    return HlpInstance(
        inst.branches, inst.hubs, inst.tasks, alpha, inst.variant, inst.geometry, name=f"audit-{seed}"
    )


def audit_many(instances, alphas=ALPHA_GRID, modes=None) -> list[AuditRow]:
    rows = []
    for inst in instances:
        for a in alphas:
            rows.extend(audit_instance(inst.with_alpha(a), modes=modes))
    return rows
