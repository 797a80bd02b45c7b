"""Ground truth by hub-subset enumeration, and LP-format export of the ILP."""

from __future__ import annotations

import itertools
import math
from pathlib import Path

import numpy as np

from .errors import OracleLimitError
from .model import HlpInstance, HlpSolution
from .pipeline import _route_arrays

EXACT_HLP_LIMIT = 18


def exact_hlp(inst: HlpInstance, limit: int = EXACT_HLP_LIMIT) -> HlpSolution:
    """Optimal solution by trying every admissible hub subset.

    Subsets hold at most ``p`` hubs when the variant limits them; uHLP tries
    every nonempty subset. Ties go to the lexicographically smallest subset.
    """
    hubs = sorted(inst.hubs)
    if len(hubs) > limit:
        raise OracleLimitError("hub", len(hubs), limit)
    max_size = inst.variant.p or len(hubs)
    t = np.asarray(inst.tasks, dtype=np.intp).reshape(-1, 2)
    setup = {h: inst.setup_cost(h) for h in hubs}
    best = None
    for size in range(1, max_size + 1):
        for subset in itertools.combinations(hubs, size):
            ids = np.asarray(subset, dtype=np.intp)
            cost, _, _ = _route_arrays(inst.dist, inst.alpha, t[:, 0], t[:, 1], ids)
            transport = float(cost.sum())
            value = transport + math.fsum(setup[h] for h in subset)
            if best is None or (value, subset) < best[0]:
                best = ((value, subset), transport)
    (_, subset), transport = best
    ids = np.asarray(subset, dtype=np.intp)
    _, i, j = _route_arrays(inst.dist, inst.alpha, t[:, 0], t[:, 1], ids)
    tours = tuple(zip(ids[i].tolist(), ids[j].tolist()))
    setup_cost = math.fsum(setup[h] for h in subset) if inst.variant.setup is not None else 0.0
    return HlpSolution(tuple(subset), tours, transport, setup_cost, "exact")


def _fmt(x: float) -> str:
    return repr(float(x))


def _wrap(terms, indent=" ", width=8):
    lines = []
    for s in range(0, len(terms), width):
        lines.append(indent + " ".join(terms[s : s + width]))
    return lines


def ilp_text(inst: HlpInstance) -> str:
    """The variant's ILP in CPLEX LP format.

    Variables are ``X_b_h_h2_b2`` (tour ``b -> h -> h2 -> b2`` used) and
    ``Y_h`` (hub ``h`` open); only ordered pairs that are tasks get X variables.
    """
    d = inst.dist
    a = inst.alpha
    hubs = list(inst.hubs)
    xs = []
    obj = []
    for b, b2 in inst.tasks:
        for h in hubs:
            for h2 in hubs:
                name = f"X_{b}_{h}_{h2}_{b2}"
                xs.append((name, b, h, h2, b2))
                obj.append(f"+ {_fmt(d[b, h] + a * d[h, h2] + d[h2, b2])} {name}")
    if inst.variant.setup is not None:
        for h in hubs:
            obj.append(f"+ {_fmt(inst.setup_cost(h))} Y_{h}")
    if not obj:
        obj.append(f"+ 0 Y_{hubs[0]}")
    obj[0] = obj[0][2:]

    out = [f"\\ {inst.variant.kind} hub location, alpha={_fmt(a)}", "Minimize"]
    out += _wrap(["obj:"] + obj)
    out.append("Subject To")
    if inst.variant.p is not None:
        terms = [f"+ Y_{h}" for h in hubs]
        terms[0] = terms[0][2:]
        out += _wrap(["card:"] + terms + [f"<= {inst.variant.p}"])
    per_task = len(hubs) * len(hubs)
    for t, (b, b2) in enumerate(inst.tasks):
        names = [x[0] for x in xs[t * per_task : (t + 1) * per_task]]
        terms = [f"+ {n}" for n in names]
        terms[0] = terms[0][2:]
        out += _wrap([f"assign_{b}_{b2}:"] + terms + ["= 1"])
    for name, b, h, h2, b2 in xs:
        out.append(f" link1_{name[2:]}: {name} - Y_{h} <= 0")
        out.append(f" link2_{name[2:]}: {name} - Y_{h2} <= 0")
    out.append("Binary")
    names = [x[0] for x in xs] + [f"Y_{h}" for h in hubs]
    out += _wrap(names)
    out.append("End")
    return "\n".join(out) + "\n"


def export_ilp(inst: HlpInstance, path) -> Path:
    path = Path(path)
    path.write_text(ilp_text(inst), encoding="utf-8")
    return path
