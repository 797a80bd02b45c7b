"""Facility location solvers over the dense (cities x facilities) cost matrix.

All argmin/argmax ties go to the lowest facility index, so results do not
depend on evaluation order.
"""

from __future__ import annotations

import enum
import heapq
import itertools
import math

import numpy as np

from .errors import ConfigurationError, InputError, OracleLimitError
from .reduction import FlpInstance, FlpSolution

EXACT_FLP_LIMIT = 20


class FlpSolverKind(str, enum.Enum):
    GREEDY_K_MEDIAN = "greedy-k-median"
    GREEDY_UFLP = "greedy-uflp"
    GREEDY_K_FLP = "greedy-k-flp"
    EXACT = "exact"


def nearest_assignment(G: np.ndarray, open_facilities) -> np.ndarray:
    cols = np.asarray(sorted(open_facilities), dtype=np.intp)
    return cols[np.argmin(G[:, cols], axis=1)]


def finalize(flp: FlpInstance, G: np.ndarray, open_facilities, solver: str) -> FlpSolution:
    """Assign every city to its nearest open facility and price the result."""
    opened = tuple(sorted(int(f) for f in open_facilities))
    if flp.k is not None and len(opened) > flp.k:
        raise InputError(f"{len(opened)} facilities open but k={flp.k}")
    if opened:
        assign = nearest_assignment(G, opened)
        connection = float(G[np.arange(len(assign)), assign].sum())
    elif G.shape[0]:
        raise InputError("cities cannot be served without an open facility")
    else:
        assign = np.empty(0, dtype=np.intp)
        connection = 0.0
    setup = math.fsum(flp.setup_array()[list(opened)]) if flp.setup is not None else 0.0
    return FlpSolution(opened, tuple(int(a) for a in assign), connection, setup, solver)


def _require_k(flp: FlpInstance) -> int:
    if flp.k is None:
        raise ConfigurationError("this solver needs a facility limit k")
    if flp.k > flp.n_facilities:
        raise InputError(f"k={flp.k} exceeds the {flp.n_facilities} facilities")
    return flp.k


def _kmedian_open(G: np.ndarray, k: int, setup=None, objective="total", stop_when_worse=False):
    n_cities, n_fac = G.shape
    cur = np.full(n_cities, np.inf)
    opened: list[int] = []
    current_total = np.inf
    open_setup = 0.0
    for _ in range(k):
        cand = np.minimum(cur[:, None], G)
        if objective == "total":
            score = cand.sum(axis=0)
        elif objective == "max":
            score = cand.max(axis=0) if n_cities else np.zeros(n_fac)
        else:
            raise InputError(f"unknown greedy objective {objective!r}")
        if setup is not None:
            score = score + open_setup + setup
        score[opened] = np.inf
        f = int(np.argmin(score))
        if stop_when_worse and opened and score[f] > current_total:
            break
        opened.append(f)
        cur = cand[:, f]
        if setup is not None:
            open_setup += float(setup[f])
        current_total = score[f]
    return opened


def greedy_k_median(flp: FlpInstance, objective: str = "total", G=None) -> FlpSolution:
    """Open ``k`` facilities one at a time, each time the one that lowers total cost most.

    ``objective="max"`` instead picks the facility minimising the largest
    city connection cost.
    """
    k = _require_k(flp)
    if flp.n_facilities == 0:
        raise InputError("no facilities")
    G = flp.cost_matrix() if G is None else G
    return finalize(flp, G, _kmedian_open(G, k, objective=objective), "greedy-k-median")


def _best_prefix(values: np.ndarray, cost: float):
    """Minimum of ``(cost + sum of j smallest) / j``; returns (ratio, order, j)."""
    order = np.argsort(values, kind="stable")
    ratios = (cost + np.cumsum(values[order])) / np.arange(1, len(values) + 1)
    best = ratios.min()
    # among equal ratios cover as many cities as possible
    j = int(np.nonzero(ratios == best)[0][-1]) + 1
    return float(best), order, j


def _uflp_open(G: np.ndarray, setup: np.ndarray) -> list[int]:
    n_cities, n_fac = G.shape
    uncovered = np.ones(n_cities, dtype=bool)
    cost = setup.astype(np.float64).copy()
    is_open = np.zeros(n_fac, dtype=bool)
    opened: list[int] = []
    if n_cities == 0:
        return opened

    def evaluate(f):
        idx = np.nonzero(uncovered)[0]
        if len(idx) == 0:
            return math.inf, idx, 0
        ratio, order, j = _best_prefix(G[idx, f], cost[f])
        return ratio, idx[order[:j]], j

    # Keys are lower bounds: shrinking the uncovered set never lowers a
    # facility's best ratio, except when it opens and its cost drops to 0,
    # at which point it is re-evaluated immediately.
    heap = [(evaluate(f)[0], f) for f in range(n_fac)]
    heapq.heapify(heap)
    while uncovered.any():
        while True:
            _, f = heapq.heappop(heap)
            ratio, cover, _ = evaluate(f)
            if not heap or (ratio, f) <= heap[0]:
                break
            heapq.heappush(heap, (ratio, f))
        uncovered[cover] = False
        if not is_open[f]:
            is_open[f] = True
            opened.append(f)
            cost[f] = 0.0
        heapq.heappush(heap, (evaluate(f)[0], f))
    return opened


def greedy_uflp(flp: FlpInstance, G=None) -> FlpSolution:
    """Set-cover style greedy: repeatedly cover the cheapest-per-city group of cities."""
    if flp.setup is None:
        raise ConfigurationError("greedy uFLP needs facility set-up costs")
    G = flp.cost_matrix() if G is None else G
    return finalize(flp, G, _uflp_open(G, flp.setup_array()), "greedy-uflp")


def greedy_k_flp(flp: FlpInstance, G=None) -> FlpSolution:
    """Greedy uFLP if it respects ``k``; otherwise a set-up aware greedy k-median."""
    k = _require_k(flp)
    if flp.setup is None:
        raise ConfigurationError("greedy k-FLP needs facility set-up costs")
    G = flp.cost_matrix() if G is None else G
    setup = flp.setup_array()
    opened = _uflp_open(G, setup)
    if len(opened) <= k:
        return finalize(flp, G, opened, "greedy-k-flp")
    opened = _kmedian_open(G, k, setup=setup, stop_when_worse=True)
    return finalize(flp, G, opened, "greedy-k-flp")


def exact_flp(flp: FlpInstance, limit: int = EXACT_FLP_LIMIT, G=None) -> FlpSolution:
    """Enumerate every nonempty facility subset (of size at most ``k``)."""
    n_fac = flp.n_facilities
    if n_fac > limit:
        raise OracleLimitError("facility", n_fac, limit)
    if n_fac == 0:
        raise InputError("no facilities")
    G = flp.cost_matrix() if G is None else G
    setup = flp.setup_array()
    max_size = n_fac if flp.k is None else min(flp.k, n_fac)
    best_key = None
    best_set = None
    # combinations() yields each size in lexicographic order
    for size in range(1, max_size + 1):
        for subset in itertools.combinations(range(n_fac), size):
            cols = list(subset)
            value = float(G[:, cols].min(axis=1).sum()) + math.fsum(setup[cols])
            key = (value, subset)
            if best_key is None or key < best_key:
                best_key, best_set = key, subset
    return finalize(flp, G, best_set, "exact")


def solve_flp(flp: FlpInstance, kind, greedy_objective: str = "total", limit: int = EXACT_FLP_LIMIT) -> FlpSolution:
    kind = FlpSolverKind(kind)
    if kind is FlpSolverKind.GREEDY_K_MEDIAN:
        return greedy_k_median(flp, objective=greedy_objective)
    if kind is FlpSolverKind.GREEDY_UFLP:
        if flp.k is not None and flp.k < flp.n_facilities:
            raise ConfigurationError("greedy uFLP ignores the facility limit k")
        return greedy_uflp(flp)
    if kind is FlpSolverKind.GREEDY_K_FLP:
        return greedy_k_flp(flp)
    return exact_flp(flp, limit=limit)
