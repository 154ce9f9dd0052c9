"""Hungarian matching: optimality, padding, tie-breaks, pure-cluster sets."""

from itertools import permutations

import numpy as np
import pytest

from senseshift import CostMatrix, build_cost_matrix, hungarian


def brute_force_min(costs: np.ndarray) -> float:
    s = costs.shape[0]
    best = min(sum(costs[i, p[i]] for i in range(s)) for p in permutations(range(s)))
    return float(best)


def brute_force_lex_min(costs: np.ndarray) -> tuple:
    s = costs.shape[0]
    best = None
    for p in sorted(permutations(range(s))):
        total = sum(float(costs[i, p[i]]) for i in range(s))
        if best is None or total < best[0]:
            best = (total, p)
    return best[1]


def test_matches_brute_force_on_random_matrices():
    rng = np.random.default_rng(0)
    for s in (2, 3, 4):
        for _ in range(30):
            costs = rng.uniform(0.0, 1.0, (s, s))
            m = hungarian(CostMatrix(costs=costs, m1=s, m2=s))
            assert m.total_cost == pytest.approx(brute_force_min(costs), rel=1e-9)


def test_lexicographic_tie_break():
    z = np.zeros((3, 3))
    m = hungarian(CostMatrix(costs=z, m1=3, m2=3))
    assert m.pairs == ((0, 0), (1, 1), (2, 2))

    ones = np.ones((2, 2))
    m2 = hungarian(CostMatrix(costs=ones, m1=2, m2=2))
    assert m2.pairs == ((0, 0), (1, 1))

    anti = np.array([[1.0, 0.0], [0.0, 1.0]])
    m3 = hungarian(CostMatrix(costs=anti, m1=2, m2=2))
    assert m3.pairs == ((0, 1), (1, 0))
    assert m3.total_cost == 0.0


def test_lexicographic_matches_brute_force_on_tied_grids():
    rng = np.random.default_rng(5)
    for s in (2, 3, 4):
        for _ in range(25):
            # few distinct values force plenty of exactly tied optima
            costs = rng.integers(0, 3, size=(s, s)).astype(np.float64)
            m = hungarian(CostMatrix(costs=costs, m1=s, m2=s))
            cols = tuple(j for _, j in m.pairs)
            assert cols == brute_force_lex_min(costs)


def test_build_cost_matrix_real_block_and_padding():
    c1 = np.array([[0.0, 0.0], [3.0, 4.0]])
    c2 = np.array([[0.0, 0.0]])
    cm = build_cost_matrix(c1, c2)
    assert cm.costs.shape == (2, 2)
    assert cm.costs[0, 0] == 0.0
    assert cm.costs[1, 0] == pytest.approx(5.0)
    assert (cm.costs[:, 1] == 0.0).all()  # dummy column
    assert (cm.m1, cm.m2) == (2, 1)


def test_pure_sets_extra_cluster_in_c1():
    c1 = np.array([[0.0], [10.0], [50.0]])
    c2 = np.array([[0.2], [10.3]])
    m = hungarian(build_cost_matrix(c1, c2))
    assert m.pairs[0] == (0, 0) and m.pairs[1] == (1, 1)
    assert m.pure_in_c1 == {2}
    assert m.pure_in_c2 == frozenset()


def test_pure_sets_extra_cluster_in_c2():
    c1 = np.array([[0.0]])
    c2 = np.array([[0.2], [10.3], [50.0]])
    m = hungarian(build_cost_matrix(c1, c2))
    assert m.col_of_row(0) == 0
    assert m.pure_in_c1 == frozenset()
    assert m.pure_in_c2 == {1, 2}
    assert m.row_of_col(1) in (1, 2)


def test_dummy_neutrality_against_restricted_brute_force():
    # real-real pairs chosen under padding cost no more than the best
    # injective assignment of the smaller side into the larger one
    rng = np.random.default_rng(9)
    for _ in range(20):
        c1 = rng.normal(size=(4, 3))
        c2 = rng.normal(size=(3, 3))
        cm = build_cost_matrix(c1, c2)
        m = hungarian(cm)
        real = cm.costs[:4, :3]
        best = min(
            sum(real[rows[j], j] for j in range(3))
            for rows in permutations(range(4), 3)
        )
        assert m.total_cost == pytest.approx(float(best), rel=1e-9)


def test_cost_matrix_validation():
    with pytest.raises(ValueError):
        CostMatrix(costs=np.zeros((2, 3)), m1=2, m2=3).validate()
    bad = np.zeros((3, 3))
    bad[2, 0] = 0.5  # dummy row must stay zero
    with pytest.raises(ValueError):
        CostMatrix(costs=bad, m1=2, m2=3).validate()
    with pytest.raises(ValueError):
        CostMatrix(costs=np.full((2, 2), np.nan), m1=2, m2=2).validate()
    with pytest.raises(ValueError):
        build_cost_matrix(np.zeros((2, 3)), np.zeros((2, 4)))


def test_single_cluster_each_side():
    m = hungarian(build_cost_matrix(np.array([[1.0, 1.0]]), np.array([[1.5, 1.0]])))
    assert m.pairs == ((0, 0),)
    assert m.total_cost == pytest.approx(0.5)
    assert not m.pure_in_c1 and not m.pure_in_c2
