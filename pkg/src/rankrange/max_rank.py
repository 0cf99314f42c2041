"""Maximal rank of the matrices contained in an interval matrix.

For a square matrix the question "is the maximal rank full?" reduces to
partial generalized diagonals (pg-diagonals): selections of k entries
with pairwise distinct rows and columns.  A diagonal is totally
nonconstant when every selected interval has positive width, and

    det^c(mu) = sum over permutations whose whole diagonal is constant
                of sign(sigma) * product of the diagonal values

is the "constant part" of the determinant.  The maximal rank of a p x p
matrix is below p iff (1) there is no totally nonconstant pg-diagonal of
length p, and (2) the complementary matrix of every totally nonconstant
pg-diagonal of length 0..p-1 has det^c = 0.  The maximal rank of a
general matrix is the largest t for which some t x t submatrix fails
that test, i.e. is full.

The module also ships the classic center/radius sign-vertex determinant
test deciding whether EVERY member of a square matrix is nonsingular
("regularity", equivalently: minimal rank is full); it serves as an
independent cross-check for the 3-column minimal-rank decider.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .intervals import IntervalMatrix, PointMatrix, exact_det


@dataclass(frozen=True)
class PgDiagonal:
    """Paired distinct row/column index tuples; ``sign`` is the parity of
    the column sequence against the ascending row order (the permutation
    sign when the diagonal has full length)."""

    row_indices: tuple
    col_indices: tuple
    sign: int


@dataclass(frozen=True)
class CenterRadius:
    center: PointMatrix
    radius: PointMatrix


def center_radius(mu: IntervalMatrix) -> CenterRadius:
    two = Fraction(2)
    center = PointMatrix(mu.rows, mu.cols,
                         tuple(tuple((e.lo + e.hi) / two for e in row) for row in mu.entries))
    radius = PointMatrix(mu.rows, mu.cols,
                         tuple(tuple((e.hi - e.lo) / two for e in row) for row in mu.entries))
    return CenterRadius(center, radius)


def _permutation_sign(cols) -> int:
    inversions = sum(1 for a, b in itertools.combinations(cols, 2) if a > b)
    return -1 if inversions % 2 else 1


def constant_diagonal_det(mu: IntervalMatrix) -> Fraction:
    """det^c: the signed diagonal-product sum over all-constant diagonals.

    Computed as the exact determinant of the point matrix that keeps
    constant values and zeroes every nonconstant entry: any expansion
    term through a zeroed entry vanishes, leaving exactly the
    all-constant-diagonal terms.
    """
    if mu.rows != mu.cols:
        raise ValueError("det^c of a non-square matrix")
    zero = Fraction(0)
    point = PointMatrix(mu.rows, mu.cols,
                        tuple(tuple(e.lo if e.is_constant else zero for e in row)
                              for row in mu.entries))
    return exact_det(point)


def totally_nonconstant_diagonals(mu: IntervalMatrix, k: int) -> Iterator[PgDiagonal]:
    """All pg-diagonals of length k whose entries all have positive width
    (k = 0 yields the single empty diagonal)."""
    p = mu.rows
    if mu.rows != mu.cols:
        raise ValueError("pg-diagonals are defined on square matrices")
    if k < 0 or k > p:
        raise ValueError(f"diagonal length {k} out of range for size {p}")
    if k == 0:
        yield PgDiagonal((), (), 1)
        return
    for rows in itertools.combinations(range(p), k):
        for cols_subset in itertools.combinations(range(p), k):
            for cols in itertools.permutations(cols_subset):
                if all(not mu[i, j].is_constant for i, j in zip(rows, cols)):
                    yield PgDiagonal(rows, cols, _permutation_sign(cols))


def complementary_matrix(mu: IntervalMatrix, diag: PgDiagonal) -> IntervalMatrix:
    """Submatrix on the rows/columns the diagonal does not touch."""
    rows = [i for i in range(mu.rows) if i not in set(diag.row_indices)]
    cols = [j for j in range(mu.cols) if j not in set(diag.col_indices)]
    return mu.submatrix(rows, cols)


def _has_nonconstant_matching(mu: IntervalMatrix, rows, cols) -> bool:
    # Is there a perfect matching rows -> cols along nonconstant entries?
    rows, cols = list(rows), list(cols)
    match_of_col = {c: None for c in cols}

    def augment(r, seen):
        for c in cols:
            if c in seen or mu[r, c].is_constant:
                continue
            seen.add(c)
            if match_of_col[c] is None or augment(match_of_col[c], seen):
                match_of_col[c] = r
                return True
        return False

    return all(augment(r, set()) for r in rows)


def square_max_rank_is_full(mu: IntervalMatrix, cache: Optional[dict] = None,
                            row_ids=None, col_ids=None) -> bool:
    """Whether a square matrix attains full rank p at some member.

    The 0x0 matrix returns False by convention (the search in
    maximal_rank never asks for t = 0).  ``cache`` memoizes det^c by
    global index sets when the caller scans many overlapping
    submatrices.
    """
    if mu.rows != mu.cols:
        raise ValueError("square test on a non-square matrix")
    p = mu.rows
    if p == 0:
        return False
    row_ids = tuple(range(p)) if row_ids is None else tuple(row_ids)
    col_ids = tuple(range(p)) if col_ids is None else tuple(col_ids)

    if _has_nonconstant_matching(mu, range(p), range(p)):
        return True

    def detc_of_complement(rows_used, cols_used):
        comp_rows = tuple(i for i in range(p) if i not in rows_used)
        comp_cols = tuple(j for j in range(p) if j not in cols_used)
        key = (tuple(row_ids[i] for i in comp_rows), tuple(col_ids[j] for j in comp_cols))
        if cache is not None and key in cache:
            return cache[key]
        value = constant_diagonal_det(mu.submatrix(comp_rows, comp_cols))
        if cache is not None:
            cache[key] = value
        return value

    for k in range(0, p):
        for rows_used in itertools.combinations(range(p), k):
            for cols_used in itertools.combinations(range(p), k):
                if k and not _has_nonconstant_matching(mu, rows_used, cols_used):
                    continue
                if detc_of_complement(set(rows_used), set(cols_used)) != 0:
                    return True
    return False


def maximal_rank(mu: IntervalMatrix) -> int:
    """Largest rank attained by any member of mu.

    Descends from min(p, q): the answer is t as soon as some t x t
    submatrix attains full rank.  Empty matrices have maximal rank 0.
    """
    if mu.is_empty:
        return 0
    cache: dict = {}
    for t in range(min(mu.rows, mu.cols), 0, -1):
        for rows in itertools.combinations(range(mu.rows), t):
            for cols in itertools.combinations(range(mu.cols), t):
                if square_max_rank_is_full(mu.submatrix(rows, cols), cache, rows, cols):
                    return t
    return 0


def is_regular(mu: IntervalMatrix, cap: int = 8) -> bool:
    """Whether every member of a square matrix is nonsingular.

    Equivalent to the minimal rank being p.  Decided by the sign-vertex
    determinant test: with C the center and D the radius matrix, all
    4^p products det(C) * det(C - T_x D T_y) over sign vectors x, y must
    be positive.  det(C) = 0 already fails (the center is a singular
    member).  The enumeration is exponential by nature, so p is capped.
    """
    if mu.rows != mu.cols:
        raise ValueError("regularity test on a non-square matrix")
    p = mu.rows
    if p == 0:
        return True
    if p > cap:
        raise ValueError(f"size {p} exceeds the sign-vertex enumeration cap {cap}")
    cr = center_radius(mu)
    det_center = exact_det(cr.center)
    if det_center == 0:
        return False
    positive = det_center > 0
    # (x, y) and (-x, -y) give the same matrix, so fix x[0] = +1.
    for x_tail in itertools.product((1, -1), repeat=p - 1):
        x = (1,) + x_tail
        for y in itertools.product((1, -1), repeat=p):
            vertex = PointMatrix(p, p,
                                 tuple(tuple(cr.center[i, j] - x[i] * cr.radius[i, j] * y[j]
                                             for j in range(p))
                                       for i in range(p)))
            d = exact_det(vertex)
            if d == 0 or (d > 0) != positive:
                return False
    return True
