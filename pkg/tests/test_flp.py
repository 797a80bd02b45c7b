import numpy as np
import pytest

from hublocate.errors import ConfigurationError, InputError, OracleLimitError
from hublocate.flp import (
    EXACT_FLP_LIMIT,
    exact_flp,
    greedy_k_flp,
    greedy_k_median,
    greedy_uflp,
    nearest_assignment,
    solve_flp,
)

from conftest import MatrixFlp, brute_flp

LINE = np.abs(np.subtract.outer([0.0, 1.0, 10.0], [0.0, 10.0]))


def random_flp(seed, n_cities, n_fac, k=None, with_setup=False):
    rng = np.random.default_rng(seed)
    G = rng.random((n_cities, n_fac)) * 10
    setup = rng.random(n_fac) * 5 if with_setup else None
    return MatrixFlp(G, k, setup)


def test_k_median_line_example():
    sol = greedy_k_median(MatrixFlp(LINE, 1))
    assert sol.open_facilities == (0,)
    assert sol.objective == 11.0


def test_k_median_saturated_opens_everything():
    flp = random_flp(2, 6, 4, k=4)
    sol = greedy_k_median(flp)
    assert sol.open_facilities == (0, 1, 2, 3)
    assert list(sol.assignment) == np.argmin(flp.G, axis=1).tolist()


@pytest.mark.parametrize("seed", range(100))
def test_k_median_never_beats_exact(seed):
    rng = np.random.default_rng(1000 + seed)
    n_fac = int(rng.integers(1, 13))
    flp = random_flp(seed, int(rng.integers(1, 9)), n_fac, k=int(rng.integers(1, n_fac + 1)))
    greedy = greedy_k_median(flp).objective
    exact = exact_flp(flp).objective
    assert exact == pytest.approx(brute_flp(flp.G, flp.k), abs=1e-9)
    assert greedy >= exact - 1e-9


def test_k_median_max_objective():
    G = np.array([[0.0, 4.0], [9.0, 5.0]])
    assert greedy_k_median(MatrixFlp(G, 1)).open_facilities == (0,)
    assert greedy_k_median(MatrixFlp(G, 1), objective="max").open_facilities == (1,)
    with pytest.raises(InputError):
        greedy_k_median(MatrixFlp(G, 1), objective="median")


def test_k_median_ties_go_to_lowest_index():
    G = np.ones((3, 4))
    assert greedy_k_median(MatrixFlp(G, 2)).open_facilities == (0, 1)


def test_uflp_two_candidates():
    sol = greedy_uflp(MatrixFlp([[1.0, 0.0]], setup=[1.0, 5.0]))
    assert sol.open_facilities == (0,)
    assert sol.objective == 2.0


def test_uflp_zero_setup_opens_nearest():
    flp = random_flp(4, 7, 5, with_setup=True)
    flp.setup = (0.0,) * 5
    sol = greedy_uflp(flp)
    assert sol.objective == pytest.approx(flp.G.min(axis=1).sum())
    assert set(sol.open_facilities) == set(np.argmin(flp.G, axis=1).tolist())


def test_uflp_seed7_against_brute():
    flp = random_flp(7, 5, 3, with_setup=True)
    assert greedy_uflp(flp).objective >= brute_flp(flp.G, None, flp.setup) - 1e-9


@pytest.mark.parametrize("seed", range(50))
def test_uflp_never_beats_exact(seed):
    flp = random_flp(seed, 6, 6, with_setup=True)
    assert greedy_uflp(flp).objective >= exact_flp(flp).objective - 1e-9


def test_uflp_needs_setup():
    with pytest.raises(ConfigurationError):
        greedy_uflp(MatrixFlp(LINE))


def test_k_flp_equals_k_median_without_setup_when_limit_binds():
    # zero set-up: greedy uFLP would open both facilities, k=1 forbids it
    flp = MatrixFlp(LINE, 1, setup=[0.0, 0.0])
    assert greedy_k_flp(flp).open_facilities == greedy_k_median(MatrixFlp(LINE, 1)).open_facilities


@pytest.mark.parametrize("seed", range(20))
def test_k_flp_saturated_matches_uflp(seed):
    flp = random_flp(seed, 6, 4, k=4, with_setup=True)
    assert greedy_k_flp(flp).open_facilities == greedy_uflp(flp).open_facilities


@pytest.mark.parametrize("seed", range(40))
def test_k_flp_respects_k_and_exact(seed):
    flp = random_flp(seed, 4, 3, k=1 + seed % 3, with_setup=True)
    sol = greedy_k_flp(flp)
    assert len(sol.open_facilities) <= flp.k
    assert sol.objective >= brute_flp(flp.G, flp.k, flp.setup) - 1e-9


def test_exact_forced_single_facility():
    flp = MatrixFlp([[1.0], [2.5]], setup=[3.0])
    sol = exact_flp(flp)
    assert sol.open_facilities == (0,) and sol.objective == 6.5


def test_exact_line_k2():
    sol = exact_flp(MatrixFlp(LINE, 2))
    assert sol.open_facilities == (0, 1)
    assert sol.objective == 1.0


def test_exact_tie_prefers_smaller_subset_order():
    sol = exact_flp(MatrixFlp(np.zeros((2, 3)), 2))
    assert sol.open_facilities == (0,)


@pytest.mark.parametrize("seed", range(30))
def test_exact_matches_brute_force(seed):
    flp = random_flp(seed, 5, 7, k=None if seed % 2 else 3, with_setup=seed % 3 == 0)
    assert exact_flp(flp).objective == pytest.approx(brute_flp(flp.G, flp.k, flp.setup), abs=1e-9)


def test_exact_refuses_large():
    with pytest.raises(OracleLimitError):
        exact_flp(MatrixFlp(np.zeros((1, EXACT_FLP_LIMIT + 1))))


def test_assignment_is_nearest_open():
    flp = random_flp(11, 8, 5, k=2)
    for solver in (greedy_k_median, exact_flp):
        sol = solver(flp)
        assert set(sol.assignment) <= set(sol.open_facilities)
        cols = list(sol.open_facilities)
        assert np.allclose(flp.G[np.arange(8), list(sol.assignment)], flp.G[:, cols].min(axis=1))
    assert nearest_assignment(np.array([[3.0, 1.0, 1.0]]), [2, 1]).tolist() == [1]


def test_solvers_are_deterministic():
    flp = random_flp(5, 20, 9, k=3, with_setup=True)
    for solver in (greedy_k_median, greedy_k_flp, exact_flp):
        assert solver(flp) == solver(flp)


def test_solve_flp_dispatch():
    flp = MatrixFlp(LINE, 1, setup=[0.5, 0.5])
    assert solve_flp(flp, "greedy-k-median").solver == "greedy-k-median"
    assert solve_flp(flp, "exact").objective == pytest.approx(11.5)
    with pytest.raises(ConfigurationError):
        solve_flp(flp, "greedy-uflp")
    with pytest.raises(ValueError):
        solve_flp(flp, "simulated-annealing")
    with pytest.raises(ConfigurationError):
        greedy_k_median(MatrixFlp(LINE))


def test_no_cities():
    sol = greedy_k_median(MatrixFlp(np.zeros((0, 3)), 2))
    assert sol.objective == 0.0
    assert greedy_uflp(MatrixFlp(np.zeros((0, 3)), setup=[1, 1, 1])).open_facilities == ()
