"""Rank-0 and rank-1 containment for interval matrices.

The minimal rank is 0 exactly when every entry contains 0.  Rank-1
containment is decided through a preprocessing pipeline (reduce, make
the first line nonnegative by splitting/flipping, clamp minima up to 0)
followed by a product criterion on the resulting nonnegative reduced
matrix: a rank-one member exists iff for every h >= 2, all row tuples
i_1..i_h, column tuples j_1..j_h and permutations sigma,

    m[i_1,j_1] ... m[i_h,j_h]  <=  M[i_1,j_sigma(1)] ... M[i_h,j_sigma(h)].

Enumeration notes (they do not change the decided predicate):

* the condition is invariant under reindexing the pairs, so we walk
  multisets of (row, col) pairs and let sigma range over the distinct
  multiset permutations of the column multiset;
* tuples with a zero minimum are skipped: their left side vanishes and
  every right side is nonnegative;
* any sigma splits into cycles and any closed alternating row/column
  walk splits at a repeated index into shorter closed walks whose
  inequalities multiply back together (all sides nonnegative), so
  violations, if any, already occur at h <= min(p, q); checking up to
  that cap decides the full condition for every h_max.

The weaker "interval products intersect" condition is also provided; it
is necessary but NOT sufficient, and is never used as a decider.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from . import oracle
from .intervals import Interval, IntervalMatrix, PointMatrix, interval_mul
from .preprocess import (
    ReducedForm,
    SignCase,
    clamp_nonneg,
    embed_in_original,
    flip_point_cols,
    flip_point_rows,
    normalize_first_line,
    reduce_matrix,
    split_cases,
    straddling_positions,
)


class SplitCapExceeded(ValueError):
    """Raised when a pipeline would need more splits than the caller allows."""


def contains_zero_matrix(mu: IntervalMatrix) -> bool:
    """True iff the minimal rank is 0, i.e. every entry contains 0."""
    return all(mu[i, j].contains_zero() for i, j in mu.positions())


def multiset_tuples(p: int, h: int):
    """All size-h multisets of {1, ..., p} in lexicographic order
    (C(p+h-1, h) of them)."""
    if p < 1 or h < 1:
        raise ValueError("p and h must be positive")
    return itertools.combinations_with_replacement(range(1, p + 1), h)


def exact_h_bound(p: int, q: int) -> int:
    """The stated tuple-length bound 2^(min(p,q)-1) for exactness."""
    return 2 ** (min(p, q) - 1)


@dataclass(frozen=True)
class ProductViolation:
    """A witness that the product criterion fails.

    ``pairs[k] = (i_k, j_k)`` carry the minima side; ``matched_cols[k]``
    is the column whose maximum is matched with row i_k on the other
    side; lhs > rhs.
    """

    pairs: tuple
    matched_cols: tuple
    lhs: Fraction
    rhs: Fraction


def _validate_nonneg(mu: IntervalMatrix):
    for i, j in mu.positions():
        if mu[i, j].lo < 0:
            raise ValueError(f"entry {(i, j)} has a negative minimum")


def iter_rank_one_violations(mu: IntervalMatrix,
                             h_max: Optional[int] = None) -> Iterator[ProductViolation]:
    """All violations of the product criterion on a nonnegative matrix.

    With the default h_max (the 2^(min(p,q)-1) bound) the absence of
    violations is equivalent, for reduced matrices with both dimensions
    >= 2, to containing a rank-one matrix.
    """
    p, q = mu.rows, mu.cols
    if p < 2 or q < 2:
        raise ValueError("product criterion needs at least 2 rows and 2 columns")
    _validate_nonneg(mu)
    requested = exact_h_bound(p, q) if h_max is None else h_max
    h_cap = min(requested, min(p, q))  # larger h cannot add violations
    positive = [(i, j) for i, j in mu.positions() if mu[i, j].lo > 0]
    maxima = [[e.hi for e in row] for row in mu.entries]
    for h in range(2, h_cap + 1):
        for pairs in itertools.combinations_with_replacement(positive, h):
            lhs = Fraction(1)
            for i, j in pairs:
                lhs *= mu[i, j].lo
            rows = [i for i, _ in pairs]
            cols = [j for _, j in pairs]
            col_values = set(cols)
            floor = Fraction(1)
            for i in rows:
                floor *= min(maxima[i][c] for c in col_values)
            if lhs <= floor:
                continue  # no matching of these columns can dip below lhs
            for matched in sorted(set(itertools.permutations(cols))):
                rhs = Fraction(1)
                for i, c in zip(rows, matched):
                    rhs *= maxima[i][c]
                if lhs > rhs:
                    yield ProductViolation(pairs, matched, lhs, rhs)


def rank_one_violation(mu: IntervalMatrix,
                       h_max: Optional[int] = None) -> Optional[ProductViolation]:
    return next(iter_rank_one_violations(mu, h_max), None)


def contains_rank_one_nonneg_reduced(mu: IntervalMatrix,
                                     h_max: Optional[int] = None) -> bool:
    """Product criterion verdict for a nonnegative reduced matrix.

    For reduced inputs this equals rank-one containment; an h_max below
    min(p,q) can only err on the True side (False is always sound).
    """
    return rank_one_violation(mu, h_max) is None


def rank_one_necessary_overlap(mu: IntervalMatrix, h_max: Optional[int] = None) -> bool:
    """Necessary-only overlap condition on interval products.

    For every tuple and permutation, the product of the picked entries
    and the product of the rematched entries must intersect as
    intervals.  A rank-one member makes both products contain the same
    number, so False rules rank one out; True decides nothing (there
    are matrices passing this with no rank-one member), and this check
    is never used as a decider.
    """
    p, q = mu.rows, mu.cols
    if min(p, q) < 2:
        return True
    bound = exact_h_bound(p, q) if h_max is None else h_max
    all_positions = list(mu.positions())
    for h in range(2, bound + 1):
        for pairs in itertools.combinations_with_replacement(all_positions, h):
            lhs = Interval(Fraction(1), Fraction(1))
            for pos in pairs:
                lhs = interval_mul(lhs, mu[pos])
            rows = [i for i, _ in pairs]
            cols = [j for _, j in pairs]
            for matched in sorted(set(itertools.permutations(cols))):
                rhs = Interval(Fraction(1), Fraction(1))
                for i, c in zip(rows, matched):
                    rhs = interval_mul(rhs, mu[i, c])
                if lhs.hi < rhs.lo or rhs.hi < lhs.lo:
                    return False
    return True


@dataclass(frozen=True)
class RankOneCase:
    """Record of one first-line split branch of the pipeline."""

    split: SignCase              # branch before per-branch normalization
    normalized: SignCase         # branch after flips (first line nonneg)
    clamped: Optional[IntervalMatrix]
    blocked_entry: Optional[tuple]   # strictly negative entry, if any
    violation: Optional[ProductViolation]
    contains: bool
    conclusive: bool


@dataclass(frozen=True)
class RankOneTrace:
    """Full pipeline trace for rank-one containment."""

    original: IntervalMatrix
    reduced: ReducedForm
    pre: Optional[SignCase]      # first-line flips applied before splitting
    cases: tuple
    contains: bool
    conclusive: bool
    direct: Optional[str]        # set when no case analysis was needed


def rank_one_trace(mu: IntervalMatrix, h_max: Optional[int] = None,
                   split_cap: Optional[int] = None) -> RankOneTrace:
    """Run the containment pipeline and keep every intermediate.

    reduce -> flip sign-definite NONPOS first-line entries -> split the
    straddling first-line entries -> per-branch flips -> clamp -> product
    criterion.  The matrix contains a rank-one member iff some branch
    does.
    """
    red = reduce_matrix(mu)
    if red.matrix.is_empty:
        nonzero = any(mu[i, j].lo != 0 or mu[i, j].hi != 0 for i, j in mu.positions())
        return RankOneTrace(mu, red, None, (), nonzero, True,
                            "every entry contains 0; rank one iff some entry is not [0,0]")
    m = red.matrix
    if m.rows == 1 or m.cols == 1:
        return RankOneTrace(mu, red, None, (), True, True,
                            "reduced to a single line with all entries excluding 0")
    pre = normalize_first_line(m)
    positions = straddling_positions(pre.matrix, first_line_only=True)
    if split_cap is not None and len(positions) > split_cap:
        raise SplitCapExceeded(
            f"{len(positions)} straddling first-line entries exceed the split cap {split_cap}")
    cases = []
    for split in split_cases(pre.matrix, positions):
        norm = normalize_first_line(split.matrix)
        clamped = clamp_nonneg(norm.matrix)
        if clamped is None:
            blocked = next((i, j) for i, j in norm.matrix.positions()
                           if norm.matrix[i, j].hi < 0)
            cases.append(RankOneCase(split, norm, None, blocked, None, False, True))
            continue
        violation = rank_one_violation(clamped, h_max)
        requested = exact_h_bound(clamped.rows, clamped.cols) if h_max is None else h_max
        # False (a violation) is sound at any cap; True needs the cap to
        # reach min(p, q), past which no new violations can appear.
        case_exact = violation is not None or requested >= min(clamped.rows, clamped.cols)
        cases.append(RankOneCase(split, norm, clamped, None, violation,
                                 violation is None, case_exact))
    if any(c.contains and c.conclusive for c in cases):
        contains, conclusive = True, True
    elif any(c.contains for c in cases):
        contains, conclusive = True, False   # possibly unsound True, flagged
    else:
        contains, conclusive = False, True
    return RankOneTrace(mu, red, pre, tuple(cases), contains, conclusive, None)


def contains_rank_one(mu: IntervalMatrix, h_max: Optional[int] = None,
                      split_cap: Optional[int] = None) -> bool:
    """True iff some member of mu has rank exactly 1 (exact for the
    default h_max)."""
    return rank_one_trace(mu, h_max, split_cap).contains


def find_rank_one(mu: IntervalMatrix, split_cap: Optional[int] = None) -> Optional[PointMatrix]:
    """A rank-one member of mu, or None when there is none.

    The decision comes from the product criterion; the witness itself is
    realized by the independent positive-system oracle on the clamped
    branch that succeeded, then mapped back through the recorded flips,
    splits and deleted lines.
    """
    trace = rank_one_trace(mu, None, split_cap)
    if not trace.contains:
        return None
    red = trace.reduced
    if trace.direct is not None:
        if red.matrix.is_empty:
            pos = next((i, j) for i, j in mu.positions()
                       if mu[i, j].lo != 0 or mu[i, j].hi != 0)
            e = mu[pos]
            value = e.lo if e.lo < 0 else e.hi
            witness = PointMatrix(mu.rows, mu.cols,
                                  tuple(tuple(value if (i, j) == pos else Fraction(0)
                                              for j in range(mu.cols))
                                        for i in range(mu.rows)))
            return witness
        m = red.matrix
        grid = tuple(tuple(e.lo if e.lo > 0 else e.hi for e in row) for row in m.entries)
        local = PointMatrix(m.rows, m.cols, grid)
        return embed_in_original(local, mu.rows, mu.cols, red.kept_rows, red.kept_cols)
    for case in trace.cases:
        if not case.contains:
            continue
        solution = oracle.rank_one_feasible(case.clamped)
        if solution is None:
            raise RuntimeError(
                "product criterion and positive-system oracle disagree on a branch")
        xs, cs = solution
        local = oracle.outer_product(xs, cs)
        # Undo the per-branch flips, then the pre-split flips; split
        # branches only shrank entries, so values carry over unchanged.
        local = flip_point_cols(flip_point_rows(local, case.normalized.row_flips),
                                case.normalized.col_flips)
        local = flip_point_cols(flip_point_rows(local, trace.pre.row_flips),
                                trace.pre.col_flips)
        return embed_in_original(local, mu.rows, mu.cols, red.kept_rows, red.kept_cols)
    return None
