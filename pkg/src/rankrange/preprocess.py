"""Shared preprocessing for the rank deciders.

Three rank-range-preserving moves drive every decision procedure in this
package:

* reduction: delete every row and every column whose entries all
  contain 0; the minimal rank is unchanged and a matrix that survives
  ("reduced") has, in each line, at least one entry excluding 0;
* sign splitting: a straddling entry [a,b] with a < 0 < b may be
  replaced by [a,0] or by [0,b]: a rank r is attained in the original
  iff it is attained in one of the two branches;
* sign flips: multiplying a row or column by -1 (a kind-II elementary
  operation) leaves the set of attainable ranks unchanged.

All functions are pure; case sequences may be consumed in parallel.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .intervals import Interval, IntervalMatrix, PointMatrix, interval_neg

LOWER = "lower"
UPPER = "upper"


@dataclass(frozen=True)
class ReducedForm:
    """Reduction result plus the index bookkeeping to embed members back."""

    matrix: IntervalMatrix
    kept_rows: tuple
    kept_cols: tuple


@dataclass(frozen=True)
class SignCase:
    """One branch of a split/flip transformation of a source matrix.

    ``matrix`` is obtained from the source by first replacing each entry
    listed in ``split_choices`` by its lower ([lo,0]) or upper ([0,hi])
    half, then negating the rows and columns flagged in ``row_flips`` /
    ``col_flips`` (row flips applied before column flips; the two
    commute entrywise).
    """

    matrix: IntervalMatrix
    row_flips: tuple
    col_flips: tuple
    split_choices: tuple = field(default=())  # ((i, j, LOWER|UPPER), ...)


def reduce_matrix(mu: IntervalMatrix) -> ReducedForm:
    """Single-pass reduction against the original matrix.

    A surviving row always keeps a 0-free witness entry, because that
    entry's column is itself kept; so one pass already yields a reduced
    (or empty) matrix and the operation is idempotent.
    """
    kept_rows = tuple(i for i in range(mu.rows)
                      if any(not mu[i, j].contains_zero() for j in range(mu.cols)))
    kept_cols = tuple(j for j in range(mu.cols)
                      if any(not mu[i, j].contains_zero() for i in range(mu.rows)))
    if not kept_rows or not kept_cols:
        return ReducedForm(IntervalMatrix(0, 0, ()), (), ())
    return ReducedForm(mu.submatrix(kept_rows, kept_cols), kept_rows, kept_cols)


def is_reduced(mu: IntervalMatrix) -> bool:
    if mu.is_empty:
        return False
    return (all(any(not mu[i, j].contains_zero() for j in range(mu.cols)) for i in range(mu.rows))
            and all(any(not mu[i, j].contains_zero() for i in range(mu.rows)) for j in range(mu.cols)))


def embed_in_original(a: PointMatrix, rows: int, cols: int,
                      kept_rows: Sequence[int], kept_cols: Sequence[int]) -> PointMatrix:
    """Zero-fill a member of the reduced matrix back to the original shape.

    Deleted lines had every entry containing 0, so 0 is always an
    admissible value there, and padding with zero rows/columns does not
    change the rank.
    """
    zero = Fraction(0)
    grid = [[zero] * cols for _ in range(rows)]
    for ii, i in enumerate(kept_rows):
        for jj, j in enumerate(kept_cols):
            grid[i][j] = a[ii, jj]
    return PointMatrix(rows, cols, tuple(tuple(r) for r in grid))


def flip_rows(mu: IntervalMatrix, flags: Sequence[bool]) -> IntervalMatrix:
    return IntervalMatrix(mu.rows, mu.cols,
                          tuple(tuple(interval_neg(e) for e in row) if flag else row
                                for row, flag in zip(mu.entries, flags)))


def flip_cols(mu: IntervalMatrix, flags: Sequence[bool]) -> IntervalMatrix:
    return IntervalMatrix(mu.rows, mu.cols,
                          tuple(tuple(interval_neg(e) if flags[j] else e
                                      for j, e in enumerate(row))
                                for row in mu.entries))


def flip_point_rows(a: PointMatrix, flags: Sequence[bool]) -> PointMatrix:
    return PointMatrix(a.rows, a.cols,
                       tuple(tuple(-x for x in row) if flag else row
                             for row, flag in zip(a.entries, flags)))


def flip_point_cols(a: PointMatrix, flags: Sequence[bool]) -> PointMatrix:
    return PointMatrix(a.rows, a.cols,
                       tuple(tuple(-x if flags[j] else x for j, x in enumerate(row))
                             for row in a.entries))


def straddling_positions(mu: IntervalMatrix, first_line_only: bool = False,
                         column: Optional[int] = None):
    """Row-major list of straddling entry positions, optionally narrowed
    to the first line (row 0 plus column 0) or to a single column."""
    out = []
    for i, j in mu.positions():
        if first_line_only and i != 0 and j != 0:
            continue
        if column is not None and j != column:
            continue
        if mu[i, j].straddles_zero():
            out.append((i, j))
    return out


def split_cases(mu: IntervalMatrix, positions: Sequence) -> Iterator[SignCase]:
    """Cartesian split over the given straddling positions.

    Positions are taken in the given (row-major) order with LOWER before
    UPPER, so case indices are reproducible.
    """
    positions = list(positions)
    for pos in positions:
        if not mu[pos].straddles_zero():
            raise ValueError(f"entry {pos} does not straddle zero")
    no_flips_r = (False,) * mu.rows
    no_flips_c = (False,) * mu.cols
    zero = Fraction(0)
    for choices in itertools.product((LOWER, UPPER), repeat=len(positions)):
        grid = [list(row) for row in mu.entries]
        for (i, j), choice in zip(positions, choices):
            e = mu[i, j]
            grid[i][j] = Interval(e.lo, zero) if choice == LOWER else Interval(zero, e.hi)
        yield SignCase(IntervalMatrix(mu.rows, mu.cols, tuple(tuple(r) for r in grid)),
                       no_flips_r, no_flips_c,
                       tuple((i, j, c) for (i, j), c in zip(positions, choices)))


def sign_split_cases(mu: IntervalMatrix) -> Iterator[SignCase]:
    """Split every straddling entry; each case matrix is sign-definite
    everywhere and a rank is attained in ``mu`` iff in some case."""
    return split_cases(mu, straddling_positions(mu))


def _flip_trigger(e: Interval) -> bool:
    # Flip on NONPOS entries that are not [0,0]; straddling entries are
    # left alone (no flip can make them sign-definite).
    return e.hi <= 0 and not (e.lo == 0 == e.hi)


def normalize_first_line(mu: IntervalMatrix) -> SignCase:
    """Flip rows/columns so every sign-definite first-line entry is NONNEG.

    Order: row 0 by entry (0,0), then rows i >= 1 by (i,0), then columns
    j >= 1 by the post-row-flip (0,j).  Column flips for j >= 1 never
    disturb column 0, so the result is deterministic and the first line
    is nonnegative whenever it was sign-definite to begin with.
    """
    if mu.is_empty:
        return SignCase(mu, (), ())
    row_flips = [False] * mu.rows
    row_flips[0] = _flip_trigger(mu[0, 0])
    for i in range(1, mu.rows):
        row_flips[i] = _flip_trigger(mu[i, 0])
    flipped = flip_rows(mu, row_flips)
    col_flips = [False] * mu.cols
    for j in range(1, mu.cols):
        col_flips[j] = _flip_trigger(flipped[0, j])
    result = flip_cols(flipped, col_flips)
    return SignCase(result, tuple(row_flips), tuple(col_flips))


def normalize_col0_rows(mu: IntervalMatrix) -> SignCase:
    """Flip rows so every sign-definite column-0 entry is NONNEG."""
    row_flips = tuple(_flip_trigger(mu[i, 0]) for i in range(mu.rows))
    return SignCase(flip_rows(mu, row_flips), row_flips, (False,) * mu.cols)


def clamp_nonneg(mu: IntervalMatrix) -> Optional[IntervalMatrix]:
    """Clamp entry minima up to 0; None signals that no rank-one matrix exists.

    Requires a reduced matrix whose first line is NONNEG.  Any rank-one
    member of such a matrix is entrywise nonnegative (its first column
    and first row force all factors of the outer product to share sign),
    so: a strictly negative entry rules rank one out entirely, and
    otherwise members below 0 can never participate in one: clamping
    [lo, hi] to [max(0, lo), hi] preserves rank-one containment.
    """
    for j in range(mu.cols):
        if mu[0, j].lo < 0:
            raise ValueError("first row is not entrywise nonnegative")
    for i in range(mu.rows):
        if mu[i, 0].lo < 0:
            raise ValueError("first column is not entrywise nonnegative")
    zero = Fraction(0)
    rows = []
    for row in mu.entries:
        out = []
        for e in row:
            if e.hi < 0:
                return None
            out.append(e if e.lo >= 0 else Interval(zero, e.hi))
        rows.append(tuple(out))
    return IntervalMatrix(mu.rows, mu.cols, tuple(rows))


def apply_case(source: IntervalMatrix, case: SignCase) -> IntervalMatrix:
    """Re-apply a case's recorded splits and flips to the source matrix
    (used to validate that the recorded provenance reproduces it)."""
    grid = [list(row) for row in source.entries]
    zero = Fraction(0)
    for i, j, choice in case.split_choices:
        e = grid[i][j]
        grid[i][j] = Interval(e.lo, zero) if choice == LOWER else Interval(zero, e.hi)
    m = IntervalMatrix(source.rows, source.cols, tuple(tuple(r) for r in grid))
    return flip_cols(flip_rows(m, case.row_flips), case.col_flips)
