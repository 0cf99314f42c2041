"""End-to-end acceptance suite.

Each test enforces one shipped guarantee at its stated budget and prints
a single PASS line (visible with ``pytest -s`` or on failure).  Seeds
are fixed, so every run checks the identical instances.
"""

import itertools
import random
import time
from fractions import Fraction as F

import numpy as np

from rankrange import (
    IntervalMatrix,
    TwoVarSystem,
    exact_rank,
    interval_add,
    interval_mul,
    is_regular,
    iv,
    matrix_contains,
    maximal_rank,
    minimal_rank,
    minimal_rank_witness,
    rank_range,
    sign_condition_feasible,
    two_var_feasible,
)
from rankrange import oracle
from rankrange.intervals import Interval
from rankrange.min_rank3 import (
    sign_condition_feasible_batch,
    two_var_feasible_batch,
)
from rankrange.rank_one import (
    contains_rank_one,
    contains_rank_one_nonneg_reduced,
    iter_rank_one_violations,
    rank_one_necessary_overlap,
    rank_one_trace,
)

from gen import (
    EXAMPLE_3X4,
    EXAMPLE_LOWER,
    EXAMPLE_LOWER_NORMALIZED,
    EXAMPLE_UPPER,
    EXAMPLE_UPPER_CLAMPED,
    OVERLAP_COUNTEREXAMPLE,
    random_interval_matrix,
    random_reduced_nonneg,
)


def _report(number, label, started, budget):
    elapsed = time.perf_counter() - started
    assert elapsed < budget, f"criterion {number} exceeded its {budget}s budget ({elapsed:.1f}s)"
    print(f"ACCEPTANCE {number} {label}: PASS [{elapsed:.2f}s < {budget}s]")


def test_criterion_1_worked_example_pipeline():
    started = time.perf_counter()
    trace = rank_one_trace(EXAMPLE_3X4)
    lower, upper = trace.cases
    # the four intermediate matrices, entrywise
    assert upper.split.matrix == EXAMPLE_UPPER
    assert lower.split.matrix == EXAMPLE_LOWER
    assert lower.normalized.matrix == EXAMPLE_LOWER_NORMALIZED
    assert upper.clamped == EXAMPLE_UPPER_CLAMPED
    # the lower branch dies at its strictly negative entry
    assert lower.blocked_entry == (2, 2) and lower.clamped is None
    # the upper branch fails the product criterion, in particular via the
    # length-3 tuple with minima 2*2*3 = 12 against maxima 2*2*2 = 8
    violations = list(iter_rank_one_violations(EXAMPLE_UPPER_CLAMPED))
    triple = [v for v in violations
              if v.pairs == ((0, 0), (1, 1), (2, 2)) and v.matched_cols == (2, 0, 1)]
    assert len(triple) == 1
    assert triple[0].lhs == 12 and triple[0].rhs == 8
    # conclusion: no rank-one member anywhere
    assert trace.contains is False and trace.conclusive
    assert not contains_rank_one(EXAMPLE_3X4)
    _report(1, "worked 3x4 example reproduced", started, 1.0)


def test_criterion_2_overlap_counterexample():
    started = time.perf_counter()
    assert rank_one_necessary_overlap(OVERLAP_COUNTEREXAMPLE) is True
    assert contains_rank_one(OVERLAP_COUNTEREXAMPLE) is False
    _report(2, "overlap condition is not sufficient", started, 1.0)


def test_criterion_3_max_rank_vertex_equivalence():
    started = time.perf_counter()
    rng = random.Random(20240301)
    mismatches = 0
    for _ in range(1000):
        mu = random_interval_matrix(rng, rng.randint(1, 3), rng.randint(1, 4), bound=3)
        if maximal_rank(mu) != oracle.vertex_max_rank(mu):
            mismatches += 1
    assert mismatches == 0
    _report(3, "maximal rank = vertex oracle on 1000 matrices", started, 60.0)


def test_criterion_4_rank_one_dual_method():
    started = time.perf_counter()
    rng = random.Random(20240404)
    mismatches = 0
    positives = 0
    for _ in range(1000):
        mu = random_reduced_nonneg(rng, rng.randint(2, 4), rng.randint(2, 4))
        criterion = contains_rank_one_nonneg_reduced(mu)  # full tuple bound
        solution = oracle.rank_one_feasible(mu)
        if criterion != (solution is not None):
            mismatches += 1
            continue
        if solution is not None:
            positives += 1
            witness = oracle.outer_product(*solution)
            assert matrix_contains(mu, witness) and exact_rank(witness) == 1
    assert mismatches == 0
    assert positives > 100  # the sweep genuinely exercises both outcomes
    _report(4, f"rank-one dual methods agree (1000 matrices, {positives} positive)",
            started, 120.0)


def test_criterion_5_sign_conditions_equal_feasibility():
    started = time.perf_counter()
    rng = random.Random(20240505)
    values = np.array([-2, -1, 0, 1, 2], dtype=np.int64)
    lam_coeffs = [p for p in itertools.product((0, 1, 2), repeat=2) if any(p)]
    mismatches = total = 0

    # k = 1: all 2*2*5^4 systems with nonzero lam-coefficients
    cols = np.array(list(itertools.product((1, 2), (1, 2), values, values, values, values)),
                    dtype=np.int64)
    a1, c1 = cols[:, 0:1], cols[:, 1:2]
    b1, d1, z1, u1 = cols[:, 2:3], cols[:, 3:4], cols[:, 4:5], cols[:, 5:6]
    r1 = sign_condition_feasible_batch(a1, b1, z1, c1, d1, u1)
    r2 = two_var_feasible_batch(a1, b1, z1, c1, d1, u1)
    mismatches += int((r1 != r2).sum())
    total += len(cols)

    # k = 2: all (a, c) with some nonzero coefficient x all 25^4 (b,z,d,u) pairs
    pair_block = np.array(list(itertools.product(values, repeat=2)), dtype=np.int64)
    n_pairs = len(pair_block)
    idx = np.indices((n_pairs,) * 4).reshape(4, -1)
    b2 = pair_block[idx[0]]
    z2 = pair_block[idx[1]]
    d2 = pair_block[idx[2]]
    u2 = pair_block[idx[3]]
    block = b2.shape[0]
    for a_pair in lam_coeffs:
        a2 = np.tile(np.array(a_pair, dtype=np.int64), (block, 1))
        for c_pair in lam_coeffs:
            c2 = np.tile(np.array(c_pair, dtype=np.int64), (block, 1))
            r1 = sign_condition_feasible_batch(a2, b2, z2, c2, d2, u2)
            r2 = two_var_feasible_batch(a2, b2, z2, c2, d2, u2)
            mismatches += int((r1 != r2).sum())
            total += block
    assert mismatches == 0
    assert total == 2500 + 64 * 25 ** 4

    # the batch implementations answer exactly like the scalar references
    for _ in range(1500):
        k = rng.randint(1, 2)
        rows = [[rng.choice((1, 2)) if i == 0 and j == 0 else rng.randint(0, 2)
                 for j in range(k)] for i in range(2)]
        a_s, c_s = rows
        b_s = [rng.randint(-2, 2) for _ in range(k)]
        d_s = [rng.randint(-2, 2) for _ in range(k)]
        z_s = [rng.randint(-2, 2) for _ in range(k)]
        u_s = [rng.randint(-2, 2) for _ in range(k)]
        if not any(a_s) or not any(c_s):
            continue
        sys_ = TwoVarSystem(tuple((F(x), F(y), F(w)) for x, y, w in zip(a_s, b_s, z_s)),
                            tuple((F(x), F(y), F(w)) for x, y, w in zip(c_s, d_s, u_s)))
        assert bool(sign_condition_feasible_batch([a_s], [b_s], [z_s],
                                                  [c_s], [d_s], [u_s])[0]) \
            == sign_condition_feasible(sys_)
        assert bool(two_var_feasible_batch([a_s], [b_s], [z_s], [c_s], [d_s], [u_s])[0]) \
            == (two_var_feasible(sys_) is not None)
    _report(5, f"sign conditions = feasibility on {total} systems", started, 60.0)


def test_criterion_6_minimal_rank_cross_checks():
    started = time.perf_counter()
    rng = random.Random(20240606)
    for trial in range(500):
        mu = random_interval_matrix(rng, 3, 3, bound=3)
        value, witness = minimal_rank_witness(mu)
        assert (value == 3) == is_regular(mu)
        lo, _ = oracle.sample_rank_bounds(mu, 25, trial)
        assert value <= lo
        assert matrix_contains(mu, witness)
        if value <= 2:
            assert exact_rank(witness) == value
    _report(6, "minimal rank vs regularity and sampling on 500 matrices", started, 120.0)


def test_criterion_7_rank_range_is_an_interval():
    started = time.perf_counter()
    rng = random.Random(20240707)
    for _ in range(200):
        mu = random_interval_matrix(rng, rng.randint(1, 4), rng.randint(1, 3), bound=3)
        rr = rank_range(mu)
        _, low_witness = minimal_rank_witness(mu)
        top, high_witness = oracle.vertex_max_rank_witness(mu)
        assert top == rr.max
        visited = set(oracle.rank_path(mu, low_witness, high_witness))
        assert set(rr.members()) <= visited
    _report(7, "every rank between min and max is attained (200 matrices)", started, 60.0)


def test_criterion_8_interval_arithmetic_soundness():
    started = time.perf_counter()
    rng = random.Random(20240808)
    violations = 0
    for _ in range(100000):
        e, f = sorted(F(rng.randint(-40, 40), rng.randint(1, 8)) for _ in range(2))
        g, h = sorted(F(rng.randint(-40, 40), rng.randint(1, 8)) for _ in range(2))
        a, b = Interval(e, f), Interval(g, h)
        d1, d2 = rng.randint(1, 6), rng.randint(1, 6)
        x = e + (f - e) * F(rng.randint(0, d1), d1)
        y = g + (h - g) * F(rng.randint(0, d2), d2)
        if not interval_add(a, b).contains(x + y):
            violations += 1
        if not interval_mul(a, b).contains(x * y):
            violations += 1
    assert violations == 0
    _report(8, "set-image soundness over 100000 samples", started, 10.0)
