import random
from fractions import Fraction as F

import pytest

from rankrange import (
    IntervalMatrix,
    PointMatrix,
    exact_rank,
    iv,
    matrix_contains,
)
from rankrange import oracle
from rankrange.intervals import zero_matrix

from gen import (
    EXAMPLE_3X4,
    EXAMPLE_UPPER_CLAMPED,
    random_interval_matrix,
    random_rank_one_fattening,
)


def test_vertex_max_rank_examples():
    constant = IntervalMatrix.from_pairs([[(1, 1), (2, 2)], [(2, 2), (4, 4)]])
    assert oracle.vertex_max_rank(constant) == 1
    assert oracle.vertex_max_rank(IntervalMatrix.from_pairs([[(0, 1)]])) == 1
    assert oracle.vertex_max_rank(EXAMPLE_3X4) == 3


def test_vertex_max_rank_cap():
    with pytest.raises(ValueError):
        oracle.vertex_max_rank(EXAMPLE_3X4, cap=5)


def test_vertex_witness_is_a_vertex_member():
    rng = random.Random(1)
    for _ in range(60):
        mu = random_interval_matrix(rng, rng.randint(1, 3), rng.randint(1, 3))
        value, witness = oracle.vertex_max_rank_witness(mu)
        assert matrix_contains(mu, witness)
        assert exact_rank(witness) == value
        assert all(witness[i, j] in (mu[i, j].lo, mu[i, j].hi) for i, j in mu.positions())


def test_vertex_max_rank_monotone_under_widening():
    rng = random.Random(2)
    for _ in range(60):
        mu = random_interval_matrix(rng, 2, 3)
        before = oracle.vertex_max_rank(mu)
        i, j = rng.randrange(2), rng.randrange(3)
        grid = [list(row) for row in mu.entries]
        grid[i][j] = iv(grid[i][j].lo - 1, grid[i][j].hi + 1)
        assert oracle.vertex_max_rank(IntervalMatrix.from_rows(grid)) >= before


def test_rank_one_feasible_examples():
    assert oracle.rank_one_feasible(EXAMPLE_UPPER_CLAMPED.submatrix(
        (0, 1, 2), (0, 1, 2, 3))) is None
    fattened = IntervalMatrix.from_pairs([
        [(F(1, 2), F(3, 2)), (F(5, 2), F(7, 2))],
        [(F(3, 2), F(5, 2)), (F(11, 2), F(13, 2))],
    ])  # around outer product of x=(1,2), c=(1,3)
    solution = oracle.rank_one_feasible(fattened)
    assert solution is not None
    witness = oracle.outer_product(*solution)
    assert matrix_contains(fattened, witness)
    assert exact_rank(witness) == 1


def test_rank_one_feasible_zero_upper_bound():
    mu = IntervalMatrix.from_pairs([[(1, 2), (0, 0)], [(1, 1), (1, 1)]])
    assert oracle.rank_one_feasible(mu) is None


def test_rank_one_feasible_validates():
    with pytest.raises(ValueError):
        oracle.rank_one_feasible(IntervalMatrix.from_pairs([[(-1, 1), (1, 2)],
                                                            [(1, 2), (1, 2)]]))
    with pytest.raises(ValueError):
        oracle.rank_one_feasible(IntervalMatrix.from_pairs([[(0, 1), (0, 1)],
                                                            [(0, 1), (0, 1)]]))


def test_rank_one_feasible_single_line():
    mu = IntervalMatrix.from_pairs([[(1, 2)], [(3, 4)]])
    solution = oracle.rank_one_feasible(mu)
    assert solution is not None
    assert matrix_contains(mu, oracle.outer_product(*solution))


def test_rank_one_fattenings_always_feasible():
    rng = random.Random(3)
    for _ in range(60):
        mu = random_rank_one_fattening(rng, rng.randint(1, 4), rng.randint(1, 4))
        if any(all(mu[i, j].lo == 0 for j in range(mu.cols)) for i in range(mu.rows)) or \
                any(all(mu[i, j].lo == 0 for i in range(mu.rows)) for j in range(mu.cols)):
            continue  # not reduced
        solution = oracle.rank_one_feasible(mu)
        assert solution is not None
        witness = oracle.outer_product(*solution)
        assert matrix_contains(mu, witness) and exact_rank(witness) == 1


def test_sample_rank_bounds():
    degenerate = IntervalMatrix.from_pairs([[(1, 1), (2, 2)], [(2, 2), (4, 4)]])
    assert oracle.sample_rank_bounds(degenerate, 5, 0) == (1, 1)
    straddling = IntervalMatrix.from_pairs([[(-1, 1)] * 2] * 2)
    lo, hi = oracle.sample_rank_bounds(straddling, 3, 0)
    assert lo == 0 and hi == 2  # midpoint is zero, some vertex has rank 2
    frozen = oracle.sample_rank_bounds(EXAMPLE_3X4, 1000, 42)
    assert frozen == (2, 3)
    assert oracle.sample_rank_bounds(EXAMPLE_3X4, 200, 9) == \
        oracle.sample_rank_bounds(EXAMPLE_3X4, 200, 9)


def test_rank_path_examples():
    box = IntervalMatrix.from_pairs([[(0, 1), (0, 1)], [(0, 1), (0, 1)]])
    a = zero_matrix(2, 2)
    b = PointMatrix.from_rows([[1, 0], [0, 1]])
    assert oracle.rank_path(box, a, a) == [0]
    assert oracle.rank_path(box, a, b) == [0, 1, 2]
    with pytest.raises(ValueError):
        oracle.rank_path(box, a, PointMatrix.from_rows([[2, 0], [0, 1]]))


def test_rank_path_steps_by_at_most_one():
    rng = random.Random(4)
    for _ in range(60):
        mu = random_interval_matrix(rng, rng.randint(1, 3), rng.randint(1, 3))
        _, va = oracle.vertex_max_rank_witness(mu)
        ranks = oracle.rank_path(mu, mu.lower(), va)
        assert all(abs(x - y) <= 1 for x, y in zip(ranks, ranks[1:]))


def test_fm_feasible_basics():
    # lam >= 0, gam >= 0 alone: feasible
    assert oracle.fm_feasible([(-1, 0, 0), (0, -1, 0)])
    # lam <= -1 with lam >= 0: infeasible
    assert not oracle.fm_feasible([(-1, 0, 0), (0, -1, 0), (1, 0, -1)])
    # unbounded strip: gam free above
    assert oracle.fm_feasible([(-1, 0, 0), (0, -1, 0), (0, -1, -5)])
    assert not oracle.fm_feasible([(0, 0, -1)])  # 0 <= -1
