import math

import numpy as np
import pytest

from hublocate.audit import (
    ALPHA_GRID,
    audit_instance,
    bap1,
    bap2,
    bound_curves,
    combined_bound,
    guarantees,
    pa1,
    pa2,
    random_audit_instance,
)
from hublocate.model import Coordinates, HlpInstance, Variant

# checks that hold provably with an exact FLP solver
PROVEN = [
    "flp_opt", "pa_two_hub", "tour_two_hub", "pa_one_hub", "tour_one_hub", "bap_one_hub", "opt_lower",
    "route_s1", "route_s2", "oracle_pa", "oracle_bap", "oracle_combined", "oracle_pa_greedy",
    "oracle_bap_greedy", "flp_greedy_pa", "flp_greedy_bap",
]


def test_curve_values():
    assert bap1(0.5, 2.0) == 2.0
    assert bap2(0.5, 2.0) == 3.5
    assert pa1(0.5, 1.0) == pytest.approx(1 + 1 / 0.75)
    assert pa2(0.5, 2.0) == 3.0
    assert combined_bound(0.25, 1.0) == 1.25
    assert combined_bound(0.9, 1.0) == pytest.approx(1 / 0.9)
    assert combined_bound(0.0, 2.0) == 2.0


@pytest.mark.parametrize(
    "gamma, expected", [(2.675, 3.451), (1.488, 2.173), (2 + math.sqrt(3), 4.552)]
)
def test_combined_guarantee(gamma, expected):
    a, v = guarantees(gamma)["combined"]
    assert v == pytest.approx(expected, abs=1e-3)
    assert pa2(a, gamma) == pytest.approx(bap1(a, gamma), rel=1e-12)


def test_single_algorithm_guarantees():
    g = guarantees(1.0)
    assert g["bap"][1] == pytest.approx(2.0)
    a, v = g["pa"]
    assert pa1(a, 1.0) == pytest.approx(pa2(a, 1.0), rel=1e-9)
    assert g["combined"][1] <= min(g["bap"][1], g["pa"][1])
    with pytest.raises(ValueError):
        guarantees(0.0)


def test_bound_curves_table():
    rows = bound_curves(1.5, points=4)
    assert [r["alpha"] for r in rows] == [0.25, 0.5, 0.75, 1.0]
    assert rows[-1]["combined"] == 1.0


def test_single_hub_instance_has_unit_ratios():
    inst = HlpInstance(
        branches=[0, 1, 2], hubs=[3], tasks=[(0, 1), (2, 0)], alpha=0.5, variant=Variant.phm(1),
        geometry=Coordinates(np.array([[0, 0], [1, 0], [0, 1], [0.4, 0.4]], float)),
    )
    for a in ALPHA_GRID:
        for row in audit_instance(inst.with_alpha(a)):
            assert row.combined_ratio == 1.0
            assert row.objectives["pa"] == row.objectives["exact"] == row.objectives["bap"]
            assert row.violations == []


@pytest.mark.parametrize("seed", range(12))
def test_proven_checks_hold(seed):
    base = random_audit_instance(seed)
    for a in (0.1, 0.5, 0.9):
        for row in audit_instance(base.with_alpha(a)):
            assert not set(row.violations) & set(PROVEN), (row.instance, a, row.violations)


def test_alpha_one_comparison_is_logged_only():
    inst = random_audit_instance(4, alpha=1.0)
    rows = audit_instance(inst)
    assert all("alpha1_s1_minus_s2" in r.slacks for r in rows)
    assert all("alpha1_s1_minus_s2" not in r.violations for r in rows)


def test_random_audit_instances_are_small_and_varied():
    insts = [random_audit_instance(s) for s in range(24)]
    assert all(len(i.hubs) <= 8 and len(i.branches) <= 6 and len(i.tasks) <= 10 for i in insts)
    assert {i.variant.kind for i in insts} == {"pHM", "uHLP", "pHLP"}
    assert {i.geometry.norm_p for i in insts} == {1.0, 2.0, 3.0, math.inf}
    assert random_audit_instance(5).to_json() == random_audit_instance(5).to_json()
