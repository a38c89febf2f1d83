"""The oracles must agree with each other where their domains overlap."""

import random

from oracles import (
    best_walk_matrix,
    dp_walk_matrix,
    random_matrix,
    simple_cycle_means,
    tropical_factor_rank,
)


def test_dp_and_enumeration_agree():
    rng = random.Random(61)
    for _ in range(30):
        n = rng.randint(2, 4)
        grids = [random_matrix(rng, n, density=0.6, lo=-9).data for _ in range(rng.randint(1, 5))]
        assert dp_walk_matrix(grids) == best_walk_matrix(grids)


def test_cycle_enumeration_counts_each_cycle_once():
    # A 3-cycle plus a loop: exactly two simple cycles.
    means = simple_cycle_means(3, [(0, 1, -3.0), (1, 2, 0.0), (2, 0, 0.0), (1, 1, -2.0)])
    assert sorted(means) == [-2.0, -1.0]


def test_factor_rank_rejects_oversized_input():
    import pytest

    with pytest.raises(ValueError):
        tropical_factor_rank([[0.0] * 4 for _ in range(4)])


def test_factor_rank_handles_shift_structure():
    # u (x) v with u = (0, -1), v = (0, -2) plus one overriding entry.
    rank1 = [[0.0, -2.0], [-1.0, -3.0]]
    assert tropical_factor_rank(rank1) == 1
    bumped = [[0.0, -2.0], [-1.0, 0.0]]
    assert tropical_factor_rank(bumped) == 2
