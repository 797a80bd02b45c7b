"""End-to-end PA / BaP solvers and the routing strategies used to bound them."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, InputError
from .flp import EXACT_FLP_LIMIT, FlpSolverKind, solve_flp
from .model import PHLP, PHM, UHLP, HlpInstance, HlpSolution
from .reduction import FlpInstance, FlpSolution, build_bap, build_pa

# max elements of one temporary (origins x hubs x hubs) block
_BLOCK = 1 << 22


@dataclass(frozen=True)
class Routing:
    tours: tuple[tuple[int, int], ...]
    task_costs: np.ndarray
    transport_cost: float


def _route_arrays(D: np.ndarray, alpha: float, origins, dests, open_ids: np.ndarray):
    """Optimal two-hub routing restricted to ``open_ids`` (sorted).

    Returns per-task costs and (h index, h2 index) into ``open_ids``; ties go to
    the lexicographically smallest hub pair.
    """
    m = len(open_ids)
    n_tasks = len(origins)
    cost = np.empty(n_tasks)
    first = np.empty(n_tasks, dtype=np.intp)
    second = np.empty(n_tasks, dtype=np.intp)
    if n_tasks == 0:
        return cost, first, second
    uniq, pos = np.unique(origins, return_inverse=True)
    hub_leg = alpha * D[np.ix_(open_ids, open_ids)]
    # f[b, h2] = min over h of d(b, h) + alpha d(h, h2); arg[b, h2] the smallest such h
    f = np.empty((len(uniq), m))
    arg = np.empty((len(uniq), m), dtype=np.intp)
    step = max(1, _BLOCK // (m * m))
    for s in range(0, len(uniq), step):
        inner = D[np.ix_(uniq[s : s + step], open_ids)][:, :, None] + hub_leg[None, :, :]
        f[s : s + step] = inner.min(axis=1)
        arg[s : s + step] = inner.argmin(axis=1)
    step = max(1, _BLOCK // m)
    for s in range(0, n_tasks, step):
        rows = pos[s : s + step]
        g = f[rows] + D[np.ix_(dests[s : s + step], open_ids)]
        best = g.min(axis=1)
        h_first = arg[rows]
        key = np.where(g == best[:, None], h_first * m + np.arange(m)[None, :], m * m)
        pick = key.argmin(axis=1)
        cost[s : s + step] = best
        second[s : s + step] = pick
        first[s : s + step] = h_first[np.arange(len(rows)), pick]
    return cost, first, second


def route_optimal(inst: HlpInstance, open_hubs) -> Routing:
    """Cheapest tour per task using open hubs only (one hub when ``h == h2``)."""
    open_ids = np.asarray(sorted(set(int(h) for h in open_hubs)), dtype=np.intp)
    if len(open_ids) == 0:
        raise InputError("routing needs at least one open hub")
    hub_set = set(inst.hubs)
    if any(int(h) not in hub_set for h in open_ids):
        raise InputError("open hubs must be hubs of the instance")
    t = np.asarray(inst.tasks, dtype=np.intp).reshape(-1, 2)
    cost, i, j = _route_arrays(inst.dist, inst.alpha, t[:, 0], t[:, 1], open_ids)
    tours = tuple(zip(open_ids[i].tolist(), open_ids[j].tolist()))
    return Routing(tours, cost, float(cost.sum()))


def _facility_pairs(inst: HlpInstance, flp: FlpInstance, sol: FlpSolution):
    if len(sol.assignment) != 2 * len(inst.tasks):
        raise RuntimeError("FLP solution does not assign every city")
    a = np.asarray(sol.assignment, dtype=np.intp).reshape(-1, 2)
    return a[:, 0], a[:, 1]


def _priced(inst: HlpInstance, tours) -> Routing:
    costs = np.array([inst.tour_cost(b1, h, h2, b2) for (b1, b2), (h, h2) in zip(inst.tasks, tours)])
    return Routing(tuple(tours), costs, float(costs.sum()))


def route_strategy1(inst: HlpInstance, flp: FlpInstance, sol: FlpSolution) -> Routing:
    """Route ``b1 -> H1 -> H2 -> b2`` where H1, H2 serve the task's two cities."""
    f1, f2 = _facility_pairs(inst, flp, sol)
    hubs = flp.facilities
    return _priced(inst, [(hubs[x], hubs[y]) for x, y in zip(f1.tolist(), f2.tolist())])


def route_strategy2(inst: HlpInstance, flp: FlpInstance, sol: FlpSolution, G=None) -> Routing:
    """Route through the single hub whose city-side connection is cheaper (ties: H1)."""
    f1, f2 = _facility_pairs(inst, flp, sol)
    G = flp.cost_matrix() if G is None else G
    n = len(f1)
    side1 = G[2 * np.arange(n), f1]
    side2 = G[2 * np.arange(n) + 1, f2]
    pick = np.where(side1 <= side2, f1, f2)
    hubs = flp.facilities
    return _priced(inst, [(hubs[x], hubs[x]) for x in pick.tolist()])


def default_solver(inst: HlpInstance, flp_solver) -> FlpSolverKind:
    if flp_solver in (None, "greedy"):
        return {
            PHM: FlpSolverKind.GREEDY_K_MEDIAN,
            UHLP: FlpSolverKind.GREEDY_UFLP,
            PHLP: FlpSolverKind.GREEDY_K_FLP,
        }[inst.variant.kind]
    kind = FlpSolverKind(flp_solver)
    v = inst.variant.kind
    ok = {
        FlpSolverKind.GREEDY_K_MEDIAN: v in (PHM, PHLP),
        FlpSolverKind.GREEDY_UFLP: v == UHLP,
        FlpSolverKind.GREEDY_K_FLP: v == PHLP,
        FlpSolverKind.EXACT: True,
    }[kind]
    if not ok:
        raise ConfigurationError(f"FLP solver {kind.value} does not fit a {v} instance")
    return kind


def _setup_of(inst: HlpInstance, open_hubs) -> float:
    if inst.variant.setup is None:
        return 0.0
    return math.fsum(inst.setup_cost(h) for h in open_hubs)


def solve_reduced(inst: HlpInstance, flp: FlpInstance, flp_solver=None, greedy_objective="total",
                  limit: int = EXACT_FLP_LIMIT) -> HlpSolution:
    """Solve an already-built FLP instance, open the matching hubs and route optimally."""
    kind = default_solver(inst, flp_solver)
    sol = solve_flp(flp, kind, greedy_objective=greedy_objective, limit=limit)
    open_hubs = sol.open_hubs(flp)
    if inst.tasks:
        routing = route_optimal(inst, open_hubs)
        tours, transport = routing.tours, routing.transport_cost
    else:
        tours, transport = (), 0.0
    return HlpSolution(open_hubs, tours, transport, _setup_of(inst, open_hubs), flp.kind, sol)


def solve_pa(inst: HlpInstance, flp_solver=None, mode=None, **kw) -> HlpSolution:
    return solve_reduced(inst, build_pa(inst, mode), flp_solver, **kw)


def solve_bap(inst: HlpInstance, flp_solver=None, **kw) -> HlpSolution:
    return solve_reduced(inst, build_bap(inst), flp_solver, **kw)


def solve_combined(inst: HlpInstance, flp_solver=None, mode=None, **kw) -> HlpSolution:
    """Best of PA and BaP; PA wins ties."""
    pa = solve_pa(inst, flp_solver, mode, **kw)
    bap = solve_bap(inst, flp_solver, **kw)
    return bap if bap.objective < pa.objective else pa
