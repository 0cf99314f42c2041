"""Independent brute-force referees for the criterion-driven deciders.

Nothing here shares logic with the criteria it cross-checks:

* ``vertex_max_rank`` enumerates every endpoint ("vertex") matrix; each
  submatrix determinant is affine in each entry, so a nonzero value
  anywhere in the box implies one at a vertex and the vertex maximum
  equals the true maximal rank.
* ``rank_one_feasible`` decides existence of a positive outer product
  x c^T inside a reduced nonnegative matrix by negative-cycle detection
  on the bipartite bound graph: run multiplicatively on exact
  rationals (a cycle is "negative" when its bound product is < 1), so
  no approximate logarithms ever enter.
* ``sample_rank_bounds`` brackets the attainable ranks from seeded
  samples (midpoint, vertices, random rational members).
* ``rank_path`` walks entrywise from one member to another; consecutive
  ranks differ by at most one, which makes the attainable set of ranks
  an integer interval.
* ``fm_feasible`` settles two-variable linear systems by
  Fourier-Motzkin elimination, refereeing the vertex-enumeration
  feasibility test used by the minimal-rank decider.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Optional, Sequence

from .intervals import (
    Interval,
    IntervalMatrix,
    PointMatrix,
    exact_rank,
    matrix_contains,
)


def _nonconstant_positions(mu: IntervalMatrix):
    return [(i, j) for i, j in mu.positions() if not mu[i, j].is_constant]


def _vertex_iter(mu: IntervalMatrix, positions):
    base = [[e.lo for e in row] for row in mu.entries]
    for picks in itertools.product((False, True), repeat=len(positions)):
        grid = [row[:] for row in base]
        for (i, j), hi in zip(positions, picks):
            if hi:
                grid[i][j] = mu[i, j].hi
        yield PointMatrix(mu.rows, mu.cols, tuple(tuple(r) for r in grid))


def vertex_max_rank(mu: IntervalMatrix, cap: int = 20) -> int:
    return vertex_max_rank_witness(mu, cap)[0]


def vertex_max_rank_witness(mu: IntervalMatrix, cap: int = 20):
    """(max rank, attaining vertex matrix) over all endpoint matrices."""
    if mu.is_empty:
        return 0, PointMatrix(mu.rows, mu.cols, tuple(() for _ in range(mu.rows)))
    positions = _nonconstant_positions(mu)
    if len(positions) > cap:
        raise ValueError(
            f"{len(positions)} nonconstant entries exceed the vertex enumeration cap {cap}")
    best, best_vertex = -1, None
    full = min(mu.rows, mu.cols)
    for vertex in _vertex_iter(mu, positions):
        r = exact_rank(vertex)
        if r > best:
            best, best_vertex = r, vertex
            if best == full:
                break
    return best, best_vertex


def rank_one_feasible(mu: IntervalMatrix):
    """Positive solution (x, c) of x_i c_j in [m_ij, M_ij], or None.

    Requires a reduced matrix with nonnegative entries; for such a
    matrix a rank-one member exists iff this positive system does.  An
    entry with upper bound 0 forces x_i c_j = 0 and is immediately
    infeasible; a zero lower bound simply contributes no lower arc.
    """
    p, q = mu.rows, mu.cols
    if p < 1 or q < 1:
        raise ValueError("empty matrix")
    for i, j in mu.positions():
        if mu[i, j].lo < 0:
            raise ValueError("entries must be nonnegative")
    if not all(any(mu[i, j].lo > 0 for j in range(q)) for i in range(p)) or \
       not all(any(mu[i, j].lo > 0 for i in range(p)) for j in range(q)):
        raise ValueError("matrix is not reduced")
    if any(mu[i, j].hi == 0 for i, j in mu.positions()):
        return None

    # Nodes 0..p-1 are rows (potential ~ x_i), p..p+q-1 columns
    # (potential ~ 1/c_j).  Edge col->row with weight M enforces
    # x_i <= (1/c_j) M; edge row->col with weight 1/m enforces m <= x_i c_j.
    n = p + q
    edges = []
    for i, j in mu.positions():
        edges.append((p + j, i, mu[i, j].hi))
        if mu[i, j].lo > 0:
            edges.append((i, p + j, 1 / mu[i, j].lo))
    dist = [Fraction(1)] * n
    for _sweep in range(n + 1):
        changed = False
        for src, dst, weight in edges:
            candidate = dist[src] * weight
            if candidate < dist[dst]:
                dist[dst] = candidate
                changed = True
        if not changed:
            break
    else:
        return None  # still relaxing after n+1 sweeps: bound-product cycle < 1
    xs = tuple(dist[:p])
    cs = tuple(1 / dist[p + j] for j in range(q))
    return xs, cs


def outer_product(xs: Sequence[Fraction], cs: Sequence[Fraction]) -> PointMatrix:
    return PointMatrix(len(xs), len(cs),
                       tuple(tuple(x * c for c in cs) for x in xs))


def sample_rank_bounds(mu: IntervalMatrix, n: int, seed: int,
                       vertex_cap: int = 12, vertex_sample: int = 256):
    """(min, max) of exact ranks over a deterministic sample of members.

    The sample always contains the midpoint matrix, all vertices when
    there are at most ``vertex_cap`` nonconstant entries (else a seeded
    subset of ``vertex_sample``), and ``n`` random rational members.
    The minimum is an upper bound on the minimal rank, the maximum a
    lower bound on the maximal rank.
    """
    rng = random.Random(seed)
    lo = hi = exact_rank(mu.midpoint())

    positions = _nonconstant_positions(mu)
    if len(positions) <= vertex_cap:
        vertices = _vertex_iter(mu, positions)
    else:
        def seeded_vertices():
            for _ in range(vertex_sample):
                grid = [[e.lo for e in row] for row in mu.entries]
                for i, j in positions:
                    if rng.random() < 0.5:
                        grid[i][j] = mu[i, j].hi
                yield PointMatrix(mu.rows, mu.cols, tuple(tuple(r) for r in grid))
        vertices = seeded_vertices()
    for vertex in vertices:
        r = exact_rank(vertex)
        lo, hi = min(lo, r), max(hi, r)

    for _ in range(n):
        grid = []
        for row in mu.entries:
            out = []
            for e in row:
                if e.is_constant:
                    out.append(e.lo)
                else:
                    denom = rng.randint(1, 12)
                    t = Fraction(rng.randint(0, denom), denom)
                    out.append(e.lo + (e.hi - e.lo) * t)
            grid.append(tuple(out))
        r = exact_rank(PointMatrix(mu.rows, mu.cols, tuple(grid)))
        lo, hi = min(lo, r), max(hi, r)
    return lo, hi


def rank_path(mu: IntervalMatrix, a: PointMatrix, b: PointMatrix):
    """Ranks along the entry-swap chain from a to b (both members of mu).

    Entries where a and b differ are swapped one at a time in row-major
    order; every intermediate matrix stays in mu and consecutive ranks
    differ by at most 1, so the returned list covers every integer
    between its extremes.
    """
    if not matrix_contains(mu, a) or not matrix_contains(mu, b):
        raise ValueError("both endpoints must belong to the interval matrix")
    ranks = [exact_rank(a)]
    current = a
    for i, j in mu.positions():
        if current[i, j] != b[i, j]:
            current = current.replace(i, j, b[i, j])
            ranks.append(exact_rank(current))
    return ranks


def fm_feasible(constraints) -> bool:
    """Exact feasibility of {alpha*lam + beta*gam <= delta} by
    Fourier-Motzkin elimination (lam eliminated first, then gam).

    Sign constraints on the variables must be passed as rows, e.g.
    (-1, 0, 0) for lam >= 0.
    """
    uppers, lowers, residual = [], [], []
    for alpha, beta, delta in constraints:
        if alpha > 0:
            uppers.append((Fraction(beta, alpha), Fraction(delta, alpha)))
        elif alpha < 0:
            lowers.append((Fraction(beta, alpha), Fraction(delta, alpha)))
        else:
            residual.append((beta, delta))
    # lam <= du - bu*gam for uppers, lam >= dl - bl*gam for lowers:
    # each (lower, upper) pair yields (bl - bu)*gam <= dl... careful:
    # dl - bl*g <= du - bu*g  <=>  (bu - bl)*g <= du - dl.
    for bl, dl in lowers:
        for bu, du in uppers:
            residual.append((bu - bl, du - dl))

    gam_lo, gam_hi = None, None
    for t, s in residual:
        if t > 0:
            bound = Fraction(s, t)
            gam_hi = bound if gam_hi is None else min(gam_hi, bound)
        elif t < 0:
            bound = Fraction(s, t)
            gam_lo = bound if gam_lo is None else max(gam_lo, bound)
        elif s < 0:
            return False
    if gam_lo is not None and gam_hi is not None and gam_lo > gam_hi:
        return False
    return True
