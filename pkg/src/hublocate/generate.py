"""Random benchmark instances: uniform points in the unit square.

Vertex layout: branches are ``0..B-1``, hubs are ``B..B+H-1``. Draw order
from a single xoshiro256** stream: branch coordinates (x then y per point),
hub coordinates, tasks, set-up costs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .model import PHLP, PHM, UHLP, Coordinates, HlpInstance, Variant
from .rng import Xoshiro256

# (tasks, branches, hubs)
FAMILIES = {
    "small": (1000, 50, 100),
    "medium": (5000, 100, 200),
    "big": (20000, 1000, 400),
}

SETUP_MODES = ("uniform", "set1")
UNIFORM_SETUP_MAX = 1.2


@dataclass(frozen=True)
class Family:
    tasks: int
    branches: int
    hubs: int

    @classmethod
    def named(cls, name: str) -> Family:
        try:
            return cls(*FAMILIES[name])
        except KeyError:
            raise InputError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}") from None


def _sample_tasks(rng: Xoshiro256, n_branches: int, n_tasks: int):
    """Distinct ordered pairs (b1 != b2), uniformly, in draw order."""
    n_pairs = n_branches * (n_branches - 1)
    if n_tasks > n_pairs:
        raise InputError(f"{n_tasks} tasks requested but only {n_pairs} ordered branch pairs exist")
    seen = set()
    tasks = []
    while len(tasks) < n_tasks:
        r = rng.below(n_pairs)
        if r in seen:
            continue
        seen.add(r)
        b1, j = divmod(r, n_branches - 1)
        tasks.append((b1, j if j < b1 else j + 1))
    return tasks


def generate(
    family="small",
    variant: str = PHM,
    alpha: float = 0.4,
    norm_p: float = 2.0,
    seed: int = 0,
    p: int | None = None,
    setup_mode: str = "uniform",
    setup_scale: float = 1.0,
) -> HlpInstance:
    """Draw one instance; the same arguments always give the same instance.

    ``family`` is a name from :data:`FAMILIES` or a :class:`Family`.
    """
    fam = Family.named(family) if isinstance(family, str) else family
    if fam.branches < 2 or fam.hubs < 1 or fam.tasks < 0:
        raise InputError("need at least two branches and one hub")
    if setup_mode not in SETUP_MODES:
        raise InputError(f"unknown set-up mode {setup_mode!r}")
    if variant not in (PHM, UHLP, PHLP):
        raise InputError(f"unknown variant {variant!r}")
    rng = Xoshiro256(seed)
    n = fam.branches + fam.hubs
    points = np.empty((n, 2))
    for i in range(n):
        points[i, 0] = rng.random()
        points[i, 1] = rng.random()
    tasks = _sample_tasks(rng, fam.branches, fam.tasks)
    setup = None
    if variant in (UHLP, PHLP):
        if setup_mode == "uniform":
            setup = [UNIFORM_SETUP_MAX * rng.random() * setup_scale for _ in range(fam.hubs)]
        else:
            setup = [1.0 * setup_scale] * fam.hubs
    if variant == PHM:
        v = Variant.phm(p)
    elif variant == UHLP:
        v = Variant.uhlp(setup)
    else:
        v = Variant.phlp(p, setup)
    return HlpInstance(
        branches=range(fam.branches),
        hubs=range(fam.branches, n),
        tasks=tasks,
        alpha=alpha,
        variant=v,
        geometry=Coordinates(points, norm_p),
        name=f"{fam.tasks}x{fam.branches}x{fam.hubs}-s{seed}",
    )
