import math

import numpy as np
import pytest

from hublocate.errors import InputError
from hublocate.generate import FAMILIES, Family, generate
from hublocate.model import PHLP, PHM, UHLP
from hublocate.rng import Xoshiro256, splitmix64


def test_splitmix64_reference_vector():
    sm = splitmix64(0)
    assert next(sm) == 0xE220A8397B1DCDAF
    assert next(sm) == 0x6E789E6AA1B965F4


def test_xoshiro_reference_vector():
    rng = Xoshiro256(0)
    rng.s = [1, 2, 3, 4]
    assert rng.next_u64() == 11520
    assert rng.next_u64() == 0
    assert rng.next_u64() == 1509978240


def test_xoshiro_ranges():
    rng = Xoshiro256(42)
    xs = [rng.random() for _ in range(2000)]
    assert 0.0 <= min(xs) and max(xs) < 1.0
    assert abs(np.mean(xs) - 0.5) < 0.03
    ks = [rng.below(7) for _ in range(7000)]
    assert set(ks) == set(range(7))
    with pytest.raises(ValueError):
        rng.below(0)


def test_seeds_differ():
    assert Xoshiro256(1).next_u64() != Xoshiro256(2).next_u64()


@pytest.mark.parametrize("name", ["small", "medium"])
def test_family_sizes(name):
    inst = generate(name, seed=3, p=6)
    assert (len(inst.tasks), len(inst.branches), len(inst.hubs)) == FAMILIES[name]


def test_big_family_declared():
    assert FAMILIES["big"] == (20000, 1000, 400)
    assert Family.named("big") == Family(20000, 1000, 400)
    with pytest.raises(InputError):
        Family.named("huge")


def test_same_seed_same_bytes():
    a = generate("small", PHLP, alpha=0.8, seed=11, p=6).to_json()
    b = generate("small", PHLP, alpha=0.8, seed=11, p=6).to_json()
    assert a == b
    assert a != generate("small", PHLP, alpha=0.8, seed=12, p=6).to_json()


def test_alpha_does_not_move_geometry():
    a = generate(Family(30, 8, 5), seed=4, alpha=0.2, p=2)
    b = generate(Family(30, 8, 5), seed=4, alpha=0.9, p=2)
    assert a.tasks == b.tasks
    assert np.array_equal(a.geometry.points, b.geometry.points)


def test_layout_and_ranges():
    inst = generate(Family(40, 10, 6), UHLP, seed=5, norm_p=math.inf)
    assert inst.branches == tuple(range(10))
    assert inst.hubs == tuple(range(10, 16))
    pts = inst.geometry.points
    assert pts.shape == (16, 2) and pts.min() >= 0 and pts.max() < 1
    assert len(set(inst.tasks)) == 40
    assert all(b1 != b2 for b1, b2 in inst.tasks)
    assert all(0 <= c < 1.2 for c in inst.variant.setup)
    assert inst.geometry.norm_p == math.inf
    assert inst.name == "40x10x6-s5"


def test_setup_modes():
    fixed = generate(Family(5, 4, 3), UHLP, seed=0, setup_mode="set1", setup_scale=2.5)
    assert fixed.variant.setup == (2.5, 2.5, 2.5)
    scaled = generate(Family(5, 4, 3), UHLP, seed=0, setup_scale=2.0)
    plain = generate(Family(5, 4, 3), UHLP, seed=0)
    assert np.allclose(scaled.variant.setup, 2 * np.array(plain.variant.setup))
    with pytest.raises(InputError):
        generate(Family(5, 4, 3), UHLP, setup_mode="gauss")


def test_every_pair_can_be_drawn():
    inst = generate(Family(12, 4, 2), PHM, seed=9, p=1)
    assert sorted(inst.tasks) == [(i, j) for i in range(4) for j in range(4) if i != j]


def test_too_many_tasks():
    with pytest.raises(InputError):
        generate(Family(13, 4, 2), PHM, p=1)


def test_bad_variant_and_p():
    with pytest.raises(InputError):
        generate(Family(3, 4, 2), "hub-center")
    with pytest.raises(InputError):
        generate(Family(3, 4, 2), PHM, p=3)
