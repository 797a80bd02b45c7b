"""Approximate solvers for multi-allocation hub location problems.

The hub location instance is reduced to a facility location instance, the
facility problem is solved, and the opened facilities become the open hubs.
"""

from .errors import ConfigurationError, InputError, OracleLimitError
from .flp import FlpSolverKind, exact_flp, greedy_k_flp, greedy_k_median, greedy_uflp
from .generate import Family, generate
from .model import (
    Coordinates,
    ExplicitMatrix,
    HlpInstance,
    HlpSolution,
    Variant,
    load_instance,
    save_instance,
    validate_metric,
)
from .oracle import exact_hlp, export_ilp
from .pipeline import (
    route_optimal,
    route_strategy1,
    route_strategy2,
    solve_bap,
    solve_combined,
    solve_pa,
)
from .reduction import FlpInstance, FlpSolution, MidpointMode, build_bap, build_pa, midpoint_distance

__version__ = "0.1.0"
