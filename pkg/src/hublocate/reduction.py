"""Reduce a hub location instance to a facility location instance.

Every task ``(b1, b2)`` becomes two cities: a forward city anchored at ``b1``
and a backward city anchored at ``b2``. City ``2*t`` is the forward city of
task ``t`` and ``2*t + 1`` its backward city. Facilities are the hubs in hub
list order.

Two reductions are provided. PA charges a city for the distance from its
anchor branch to the hub plus ``alpha`` times the distance from the task's
mid-point to the hub. BaP charges only the anchor-to-hub distance.

Mid-points are never added to the vertex set. With ``METRIC`` mode the
mid-point of ``(b1, b2)`` sits at distance ``(d(b1,v) + d(b2,v)) / 2`` from
any vertex ``v``; with ``VECTOR`` mode it is the coordinate
``b1 + (b2 - b1) / 2`` measured in the instance norm.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, InputError
from .model import Coordinates, HlpInstance, pnorm

FORWARD = "forward"
BACKWARD = "backward"

PA = "PA"
BAP = "BaP"

# bounds temporary (tasks x hubs x dim) arrays in vector mode
_CHUNK = 1 << 21


class MidpointMode(str, enum.Enum):
    METRIC = "metric"
    VECTOR = "vector"

    @classmethod
    def parse(cls, value) -> MidpointMode:
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InputError(f"unknown mid-point mode {value!r}") from None


def default_mode(inst: HlpInstance) -> MidpointMode:
    if isinstance(inst.geometry, Coordinates):
        return MidpointMode.VECTOR
    return MidpointMode.METRIC


def _check_mode(inst: HlpInstance, mode) -> MidpointMode:
    mode = default_mode(inst) if mode is None else MidpointMode.parse(mode)
    if mode is MidpointMode.VECTOR and not isinstance(inst.geometry, Coordinates):
        raise ConfigurationError("vector mid-points need coordinate geometry")
    return mode


def _midpoint_coords(inst: HlpInstance, tasks) -> np.ndarray:
    pts = inst.geometry.points
    t = np.asarray(tasks, dtype=np.intp).reshape(-1, 2)
    b1 = pts[t[:, 0]]
    return b1 + 0.5 * (pts[t[:, 1]] - b1)


def midpoint_distance(inst: HlpInstance, task, v: int, mode=None) -> float:
    """Distance between the mid-point of ``task`` and vertex ``v``."""
    b1, b2 = task
    if b1 == b2:
        raise InputError("a task needs two distinct branches")
    mode = _check_mode(inst, mode)
    inst._check_vertex(v)
    if mode is MidpointMode.METRIC:
        d = inst.dist
        return float(0.5 * d[b1, v] + 0.5 * d[b2, v])
    m = _midpoint_coords(inst, [task])[0]
    return float(pnorm(m - inst.geometry.points[v], inst.geometry.norm_p))


def _midpoint_hub_matrix(inst: HlpInstance, mode: MidpointMode) -> np.ndarray:
    """(tasks x hubs) mid-point to hub distances."""
    hubs = np.asarray(inst.hubs, dtype=np.intp)
    t = np.asarray(inst.tasks, dtype=np.intp).reshape(-1, 2)
    d = inst.dist
    if mode is MidpointMode.METRIC:
        return 0.5 * d[np.ix_(t[:, 0], hubs)] + 0.5 * d[np.ix_(t[:, 1], hubs)]
    geo = inst.geometry
    mids = _midpoint_coords(inst, t)
    hub_pts = geo.points[hubs]
    out = np.empty((len(t), len(hubs)))
    step = max(1, _CHUNK // max(1, len(hubs) * geo.points.shape[1]))
    for s in range(0, len(t), step):
        out[s : s + step] = pnorm(mids[s : s + step, None, :] - hub_pts[None], geo.norm_p)
    return out


@dataclass(frozen=True, eq=False)
class FlpInstance:
    """Facility location instance derived from a hub location instance.

    The combined node index used by :meth:`gamma` numbers cities first
    (``0..n_cities-1``) and facilities after them.
    """

    source: HlpInstance
    kind: str
    mode: MidpointMode | None
    cities: tuple[tuple[int, str], ...] = field(repr=False)
    facilities: tuple[int, ...]
    k: int | None
    setup: tuple[float, ...] | None

    @property
    def n_cities(self) -> int:
        return len(self.cities)

    @property
    def n_facilities(self) -> int:
        return len(self.facilities)

    @property
    def n_nodes(self) -> int:
        return self.n_cities + self.n_facilities

    def setup_array(self) -> np.ndarray:
        if self.setup is None:
            return np.zeros(self.n_facilities)
        return np.asarray(self.setup, dtype=np.float64)

    def anchor(self, city: int) -> int:
        """Branch the city starts from."""
        task, direction = self.cities[city]
        b1, b2 = self.source.tasks[task]
        return b1 if direction == FORWARD else b2

    def _anchors(self) -> np.ndarray:
        t = np.asarray(self.source.tasks, dtype=np.intp).reshape(-1, 2)
        return t.reshape(-1)  # forward, backward interleaved

    def _mid_dist(self, task: int, v: int) -> float:
        return midpoint_distance(self.source, self.source.tasks[task], v, self.mode)

    def _mid_mid(self, t1: int, t2: int) -> float:
        if t1 == t2:
            return 0.0
        inst = self.source
        a1, a2 = inst.tasks[t1]
        c1, c2 = inst.tasks[t2]
        if self.mode is MidpointMode.VECTOR:
            m = _midpoint_coords(inst, [(a1, a2), (c1, c2)])
            return float(pnorm(m[0] - m[1], inst.geometry.norm_p))
        d = inst.dist
        # each mid-point is half-way from the other's endpoints
        return float(0.5 * (0.5 * d[a1, c1] + 0.5 * d[a2, c1]) + 0.5 * (0.5 * d[a1, c2] + 0.5 * d[a2, c2]))

    def gamma_city_facility(self, city: int, facility: int) -> float:
        inst = self.source
        h = self.facilities[facility]
        base = inst.dist[self.anchor(city), h]
        if self.kind == BAP:
            return float(base)
        task = self.cities[city][0]
        return float(base + inst.alpha * self._mid_dist(task, h))

    def gamma(self, a: int, b: int) -> float:
        """Distance between two nodes of the combined city/facility index."""
        nc = self.n_cities
        if not (0 <= a < self.n_nodes and 0 <= b < self.n_nodes):
            raise InputError(f"node ids ({a}, {b}) out of range 0..{self.n_nodes - 1}")
        if a >= nc and b >= nc:
            d = self.source.dist[self.facilities[a - nc], self.facilities[b - nc]]
            return float(d) if self.kind == BAP else float(d * (1.0 + self.source.alpha))
        if a >= nc:
            a, b = b, a
        if b >= nc:
            return self.gamma_city_facility(a, b - nc)
        if a == b:
            return 0.0
        base = self.source.dist[self.anchor(a), self.anchor(b)]
        if self.kind == BAP:
            return float(base)
        mm = self._mid_mid(self.cities[a][0], self.cities[b][0])
        return float(base + self.source.alpha * mm)

    def cost_matrix(self) -> np.ndarray:
        """Dense (cities x facilities) connection costs."""
        inst = self.source
        hubs = np.asarray(self.facilities, dtype=np.intp)
        base = inst.dist[np.ix_(self._anchors(), hubs)]
        if self.kind == BAP:
            return base
        mh = _midpoint_hub_matrix(inst, self.mode)
        return base + inst.alpha * np.repeat(mh, 2, axis=0)


def _cities(inst: HlpInstance):
    return tuple((t, d) for t in range(len(inst.tasks)) for d in (FORWARD, BACKWARD))


def build_pa(inst: HlpInstance, mode=None) -> FlpInstance:
    return FlpInstance(
        source=inst,
        kind=PA,
        mode=_check_mode(inst, mode),
        cities=_cities(inst),
        facilities=inst.hubs,
        k=inst.variant.p,
        setup=inst.variant.setup,
    )


def build_bap(inst: HlpInstance) -> FlpInstance:
    return FlpInstance(
        source=inst,
        kind=BAP,
        mode=None,
        cities=_cities(inst),
        facilities=inst.hubs,
        k=inst.variant.p,
        setup=inst.variant.setup,
    )


@dataclass(frozen=True)
class FlpSolution:
    open_facilities: tuple[int, ...]
    assignment: tuple[int, ...]
    connection_cost: float
    setup_cost: float
    solver: str = ""

    @property
    def objective(self) -> float:
        return self.connection_cost + self.setup_cost

    def open_hubs(self, flp: FlpInstance) -> tuple[int, ...]:
        return tuple(sorted(flp.facilities[f] for f in self.open_facilities))
