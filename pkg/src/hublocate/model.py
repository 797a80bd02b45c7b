"""Hub location instances, distances and metric checks.

Vertices are indexed ``0..n-1``. Branches and hubs are lists of vertex ids and
may overlap. Geometry is either a point set with a p-norm or an explicit
symmetric distance matrix.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import InputError

METRIC_TOL = 1e-9

PHM = "pHM"
UHLP = "uHLP"
PHLP = "pHLP"
VARIANTS = (PHM, UHLP, PHLP)


def pnorm(diff: np.ndarray, p: float, axis: int = -1) -> np.ndarray:
    """p-norm along ``axis``; the only norm routine used anywhere in the package."""
    a = np.abs(diff)
    if p == 1:
        return a.sum(axis=axis)
    if p == 2:
        return np.sqrt((a * a).sum(axis=axis))
    if math.isinf(p):
        return a.max(axis=axis)
    return (a**p).sum(axis=axis) ** (1.0 / p)


@dataclass(frozen=True, eq=False)
class Coordinates:
    points: np.ndarray
    norm_p: float = 2.0

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise InputError("points must be a non-empty (n, d) array")
        if not (self.norm_p >= 1):
            raise InputError(f"norm_p must be >= 1, got {self.norm_p}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "norm_p", float(self.norm_p))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def matrix(self) -> np.ndarray:
        pts = self.points
        return pnorm(pts[:, None, :] - pts[None, :, :], self.norm_p)


@dataclass(frozen=True, eq=False)
class ExplicitMatrix:
    dist: np.ndarray

    def __post_init__(self):
        d = np.array(self.dist, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] == 0:
            raise InputError("distance matrix must be square and non-empty")
        if not np.all(np.isfinite(d)) or np.any(d < 0):
            raise InputError("distances must be finite and nonnegative")
        if np.any(np.diag(d) != 0):
            raise InputError("distance matrix must have a zero diagonal")
        if not np.array_equal(d, d.T):
            raise InputError("distance matrix must be symmetric")
        report = validate_metric(d, d.shape[0])
        if report.violations:
            i, j, k, amount = report.violations[0]
            raise InputError(
                f"triangle inequality violated {len(report.violations)} times, "
                f"e.g. d({i},{j}) + d({j},{k}) < d({i},{k}) by {amount:g}"
            )
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def matrix(self) -> np.ndarray:
        return self.dist


Geometry = Coordinates | ExplicitMatrix


@dataclass(frozen=True)
class Variant:
    """pHM (``p``), uHLP (``setup``) or pHLP (both).

    ``setup`` is aligned with the instance's hub list.
    """

    kind: str
    p: int | None = None
    setup: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in VARIANTS:
            raise InputError(f"unknown variant {self.kind!r}")
        if self.kind in (PHM, PHLP):
            if self.p is None or int(self.p) != self.p or self.p < 1:
                raise InputError(f"{self.kind} needs a positive integer p")
            object.__setattr__(self, "p", int(self.p))
        elif self.p is not None:
            raise InputError("uHLP takes no p")
        if self.kind in (UHLP, PHLP):
            if self.setup is None:
                raise InputError(f"{self.kind} needs set-up costs")
            setup = tuple(float(c) for c in self.setup)
            if any(not math.isfinite(c) or c < 0 for c in setup):
                raise InputError("set-up costs must be finite and nonnegative")
            object.__setattr__(self, "setup", setup)
        elif self.setup is not None:
            raise InputError("pHM takes no set-up costs")

    @classmethod
    def phm(cls, p):
        return cls(PHM, p=p)

    @classmethod
    def uhlp(cls, setup):
        return cls(UHLP, setup=tuple(setup))

    @classmethod
    def phlp(cls, p, setup):
        return cls(PHLP, p=p, setup=tuple(setup))

    @property
    def has_setup(self) -> bool:
        return self.setup is not None


@dataclass(frozen=True, eq=False)
class HlpInstance:
    branches: tuple[int, ...]
    hubs: tuple[int, ...]
    tasks: tuple[tuple[int, int], ...]
    alpha: float
    variant: Variant
    geometry: Geometry
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(int(b) for b in self.branches))
        object.__setattr__(self, "hubs", tuple(int(h) for h in self.hubs))
        object.__setattr__(
            self, "tasks", tuple((int(a), int(b)) for a, b in self.tasks)
        )
        object.__setattr__(self, "alpha", float(self.alpha))
        n = self.geometry.n
        if not 0.0 <= self.alpha <= 1.0:
            raise InputError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not self.hubs:
            raise InputError("at least one hub is required")
        for name, ids in (("branch", self.branches), ("hub", self.hubs)):
            if len(set(ids)) != len(ids):
                raise InputError(f"duplicate {name} id")
            bad = [v for v in ids if not 0 <= v < n]
            if bad:
                raise InputError(f"{name} id {bad[0]} is not a vertex (n={n})")
        branch_set = set(self.branches)
        seen = set()
        for t in self.tasks:
            if t[0] not in branch_set or t[1] not in branch_set:
                raise InputError(f"task {t} has an endpoint that is not a branch")
            if t[0] == t[1]:
                raise InputError(f"task {t} starts and ends at the same branch")
            if t in seen:
                raise InputError(f"duplicate task {t}")
            seen.add(t)
        v = self.variant
        if v.p is not None and v.p > len(self.hubs):
            raise InputError(f"p={v.p} exceeds the number of hubs {len(self.hubs)}")
        if v.setup is not None and len(v.setup) != len(self.hubs):
            raise InputError("need exactly one set-up cost per hub")

    @property
    def n_vertices(self) -> int:
        return self.geometry.n

    @cached_property
    def dist(self) -> np.ndarray:
        """Full vertex distance matrix (read-only)."""
        d = np.ascontiguousarray(self.geometry.matrix(), dtype=np.float64)
        d.setflags(write=False)
        return d

    @cached_property
    def hub_index(self) -> dict[int, int]:
        return {h: i for i, h in enumerate(self.hubs)}

    def setup_cost(self, hub: int) -> float:
        if self.variant.setup is None:
            return 0.0
        return self.variant.setup[self.hub_index[hub]]

    def _check_vertex(self, v):
        if not (isinstance(v, (int, np.integer)) and 0 <= v < self.n_vertices):
            raise InputError(f"unknown vertex id {v!r}")

    def distance(self, u: int, v: int) -> float:
        self._check_vertex(u)
        self._check_vertex(v)
        return float(self.dist[u, v])

    def tour_cost(self, b1: int, h: int, h2: int, b2: int) -> float:
        """Cost of ``b1 -> h -> h2 -> b2``; the hub leg is discounted by alpha."""
        for v in (b1, h, h2, b2):
            self._check_vertex(v)
        d = self.dist
        middle = 0.0 if h == h2 else self.alpha * d[h, h2]
        return float(d[b1, h] + middle + d[h2, b2])

    def with_alpha(self, alpha: float) -> HlpInstance:
        return replace(self, alpha=alpha)

    def with_variant(self, variant: Variant) -> HlpInstance:
        return replace(self, variant=variant)

    # -- JSON ---------------------------------------------------------------

    def to_dict(self) -> dict:
        v = self.variant
        variant: dict = {"type": v.kind}
        if v.p is not None:
            variant["p"] = v.p
        if v.setup is not None:
            variant["setup"] = list(v.setup)
        g = self.geometry
        if isinstance(g, Coordinates):
            norm = "inf" if math.isinf(g.norm_p) else g.norm_p
            geometry = {"kind": "coords", "norm_p": norm, "points": g.points.tolist()}
        else:
            geometry = {"kind": "matrix", "dist": g.dist.tolist()}
        return {
            "version": 1,
            "alpha": self.alpha,
            "variant": variant,
            "geometry": geometry,
            "branches": list(self.branches),
            "hubs": list(self.hubs),
            "tasks": [list(t) for t in self.tasks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":")) + "\n"

    @classmethod
    def from_dict(cls, doc: dict, name: str = "") -> HlpInstance:
        try:
            if doc.get("version") != 1:
                raise InputError(f"unsupported instance version {doc.get('version')!r}")
            vd = doc["variant"]
            variant = Variant(vd["type"], p=vd.get("p"), setup=vd.get("setup"))
            gd = doc["geometry"]
            if gd["kind"] == "coords":
                norm = gd.get("norm_p", 2.0)
                norm = math.inf if norm in ("inf", "Infinity") else float(norm)
                geometry: Geometry = Coordinates(np.array(gd["points"], float), norm)
            elif gd["kind"] == "matrix":
                geometry = ExplicitMatrix(np.array(gd["dist"], float))
            else:
                raise InputError(f"unknown geometry kind {gd['kind']!r}")
            return cls(
                branches=doc["branches"],
                hubs=doc["hubs"],
                tasks=[tuple(t) for t in doc["tasks"]],
                alpha=doc["alpha"],
                variant=variant,
                geometry=geometry,
                name=name,
            )
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed instance document: {exc!r}") from exc

    @classmethod
    def from_json(cls, text: str, name: str = "") -> HlpInstance:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"instance is not valid JSON: {exc}") from exc
        return cls.from_dict(doc, name=name)


def load_instance(path) -> HlpInstance:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return HlpInstance.from_json(text, name=path.stem)


def save_instance(inst: HlpInstance, path) -> None:
    Path(path).write_text(inst.to_json(), encoding="utf-8")


@dataclass(frozen=True)
class HlpSolution:
    """Open hubs and one ``(h, h2)`` tour per task (``h == h2`` for a single hub)."""

    open_hubs: tuple[int, ...]
    tours: tuple[tuple[int, int], ...]
    transport_cost: float
    setup_cost: float
    algorithm: str = ""
    flp: object = field(default=None, repr=False, compare=False)

    @property
    def objective(self) -> float:
        return self.transport_cost + self.setup_cost


def evaluate_solution(inst: HlpInstance, open_hubs: Sequence[int], tours) -> tuple[float, float]:
    """Recompute (transport, setup) of a solution from scratch and check feasibility."""
    open_set = set(open_hubs)
    if inst.variant.p is not None and len(open_set) > inst.variant.p:
        raise InputError(f"{len(open_set)} hubs open, p={inst.variant.p}")
    if len(tours) != len(inst.tasks):
        raise InputError("need exactly one tour per task")
    transport = 0.0
    for (b1, b2), (h, h2) in zip(inst.tasks, tours):
        if h not in open_set or h2 not in open_set:
            raise InputError(f"tour ({h}, {h2}) uses a closed hub")
        transport += inst.tour_cost(b1, h, h2, b2)
    setup = math.fsum(inst.setup_cost(h) for h in open_set)
    return transport, setup


# -- metric validation --------------------------------------------------------


@dataclass
class MetricReport:
    violations: list[tuple[int, int, int, float]]
    max_violation: float
    checked: int

    @property
    def ok(self) -> bool:
        return not self.violations


def _as_matrix(dist_fn, n: int) -> np.ndarray:
    if isinstance(dist_fn, np.ndarray):
        return dist_fn
    m = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            m[i, j] = dist_fn(i, j)
    return m


def validate_metric(
    dist_fn: Callable[[int, int], float] | np.ndarray,
    vertex_count: int,
    mode: str = "exhaustive",
    n_triples: int = 10_000,
    seed: int = 0,
    tol: float = METRIC_TOL,
) -> MetricReport:
    """Check ``d(i,j) + d(j,k) >= d(i,k) - tol``.

    ``dist_fn`` is a callable ``(i, j) -> float`` or a precomputed matrix.
    A violation is recorded once per triple with ``i < k``: for a symmetric
    function the mirrored triple states the same inequality.
    """
    n = vertex_count
    if mode == "exhaustive":
        m = _as_matrix(dist_fn, n)
        violations = []
        worst = 0.0
        upper = np.triu(np.ones((n, n), dtype=bool), k=1)
        for j in range(n):
            excess = m - (m[:, j, None] + m[None, j, :])
            bad = (excess > tol) & upper
            if bad.any():
                worst = max(worst, float(excess[bad].max()))
                for i, k in zip(*np.nonzero(bad)):
                    violations.append((int(i), j, int(k), float(excess[i, k])))
        violations.sort()
        return MetricReport(violations, worst, n**3)
    if mode != "sampled":
        raise InputError(f"unknown validation mode {mode!r}")

    rng = np.random.default_rng(seed)
    triples = rng.integers(0, n, size=(n_triples, 3))
    swap = triples[:, 0] > triples[:, 2]
    triples[swap, 0], triples[swap, 2] = triples[swap, 2], triples[swap, 0].copy()
    if isinstance(dist_fn, np.ndarray) or n * n <= 3 * n_triples:
        m = _as_matrix(dist_fn, n)
        i, j, k = triples.T
        excess = m[i, k] - (m[i, j] + m[j, k])
    else:
        excess = np.array(
            [dist_fn(i, k) - (dist_fn(i, j) + dist_fn(j, k)) for i, j, k in triples.tolist()]
        )
    bad = np.nonzero(excess > tol)[0]
    violations = [
        (int(triples[r, 0]), int(triples[r, 1]), int(triples[r, 2]), float(excess[r]))
        for r in bad
    ]
    worst = float(excess[bad].max()) if len(bad) else 0.0
    return MetricReport(violations, worst, n_triples)
