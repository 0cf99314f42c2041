"""Exact interval scalars and interval matrices over the rationals.

An interval matrix is a p x q grid of closed intervals [lo, hi] with
rational endpoints; a point matrix A "belongs to" it when every entry
a_ij lies in the corresponding interval.  All arithmetic here is exact
(fractions.Fraction), because every decision procedure built on top of
this module hinges on equalities and strict inequalities that floating
point cannot settle reliably.

Interval sum and product are the exact set images:

    [e,f] + [g,h] = [e+g, f+h]
    [e,f] * [g,h] = [min(eg,eh,fg,fh), max(eg,eh,fg,fh)]

Note these do not form a group: ([a,b]+[c,d]) - [c,d] != [a,b] as soon
as [c,d] has positive width.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

Rational = Fraction

RationalLike = Union[int, str, Fraction]


def to_rational(value: RationalLike) -> Fraction:
    """Exact conversion of an int, Fraction, "n/d" or decimal string.

    Floats are rejected: their binary representation would silently
    change the endpoint the caller wrote down.
    """
    if isinstance(value, bool):
        raise TypeError("boolean is not a rational endpoint")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot convert {value!r} exactly; use int, Fraction or string")


class IntervalClass(enum.Flag):
    """Sign/shape classification flags; categories overlap ([0,0] is
    NONNEG, NONPOS, ZERO and CONSTANT at once), hence a flag set."""

    NONNEG = enum.auto()          # lo >= 0
    NONPOS = enum.auto()          # hi <= 0
    STRICT_NEG = enum.auto()      # hi < 0
    STRICT_POS = enum.auto()      # lo > 0
    STRADDLES_ZERO = enum.auto()  # lo < 0 < hi
    ZERO = enum.auto()            # lo == hi == 0
    CONSTANT = enum.auto()        # lo == hi


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not isinstance(self.lo, Fraction) or not isinstance(self.hi, Fraction):
            object.__setattr__(self, "lo", to_rational(self.lo))
            object.__setattr__(self, "hi", to_rational(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"interval endpoints out of order: [{self.lo}, {self.hi}]")

    def contains(self, value) -> bool:
        return self.lo <= value <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    @property
    def is_constant(self) -> bool:
        return self.lo == self.hi

    def straddles_zero(self) -> bool:
        return self.lo < 0 < self.hi

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __repr__(self):
        return f"[{self.lo}, {self.hi}]"


def iv(lo: RationalLike, hi: RationalLike | None = None) -> Interval:
    """Shorthand constructor; iv(x) builds the degenerate interval [x, x]."""
    lo = to_rational(lo)
    hi = lo if hi is None else to_rational(hi)
    return Interval(lo, hi)


def interval_add(a: Interval, b: Interval) -> Interval:
    return Interval(a.lo + b.lo, a.hi + b.hi)


def interval_mul(a: Interval, b: Interval) -> Interval:
    products = (a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
    return Interval(min(products), max(products))


def scalar_mul(e: RationalLike, a: Interval) -> Interval:
    e = to_rational(e)
    lo, hi = e * a.lo, e * a.hi
    return Interval(min(lo, hi), max(lo, hi))


def interval_neg(a: Interval) -> Interval:
    return Interval(-a.hi, -a.lo)


def classify(a: Interval) -> IntervalClass:
    flags = IntervalClass(0)
    if a.lo >= 0:
        flags |= IntervalClass.NONNEG
    if a.hi <= 0:
        flags |= IntervalClass.NONPOS
    if a.hi < 0:
        flags |= IntervalClass.STRICT_NEG
    if a.lo > 0:
        flags |= IntervalClass.STRICT_POS
    if a.lo < 0 < a.hi:
        flags |= IntervalClass.STRADDLES_ZERO
    if a.lo == a.hi:
        flags |= IntervalClass.CONSTANT
        if a.lo == 0:
            flags |= IntervalClass.ZERO
    return flags


def _freeze_grid(entries, rows, cols, kind):
    grid = tuple(tuple(row) for row in entries)
    if len(grid) != rows or any(len(row) != cols for row in grid):
        raise ValueError(f"{kind} grid does not match declared shape {rows}x{cols}")
    return grid


@dataclass(frozen=True)
class PointMatrix:
    """Plain matrix with exact rational entries."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        grid = _freeze_grid(
            [[to_rational(x) for x in row] for row in self.entries],
            self.rows, self.cols, "point matrix",
        )
        object.__setattr__(self, "entries", grid)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]]) -> "PointMatrix":
        rows = list(rows)
        return cls(len(rows), len(rows[0]) if rows else 0, tuple(tuple(r) for r in rows))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def transpose(self) -> "PointMatrix":
        return PointMatrix(self.cols, self.rows,
                           tuple(tuple(self.entries[i][j] for i in range(self.rows))
                                 for j in range(self.cols)))

    def replace(self, i: int, j: int, value: RationalLike) -> "PointMatrix":
        value = to_rational(value)
        grid = [list(row) for row in self.entries]
        grid[i][j] = value
        return PointMatrix(self.rows, self.cols, tuple(tuple(r) for r in grid))

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i][j] for i in range(self.rows))


@dataclass(frozen=True)
class IntervalMatrix:
    """p x q grid of closed rational intervals.

    Degenerate shapes (0 rows or 0 columns) are allowed: they arise as
    complementary matrices of full-length diagonals and as the result of
    reducing a matrix whose every entry contains 0.
    """

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimensions")
        grid = _freeze_grid(self.entries, self.rows, self.cols, "interval matrix")
        for row in grid:
            for entry in row:
                if not isinstance(entry, Interval):
                    raise TypeError(f"interval matrix entry {entry!r} is not an Interval")
        object.__setattr__(self, "entries", grid)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Interval]]) -> "IntervalMatrix":
        rows = list(rows)
        return cls(len(rows), len(rows[0]) if rows else 0, tuple(tuple(r) for r in rows))

    @classmethod
    def from_pairs(cls, rows: Sequence[Sequence[Sequence[RationalLike]]]) -> "IntervalMatrix":
        """Build from nested [lo, hi] pairs, e.g. [[(0,1), (2,2)], ...]."""
        return cls.from_rows([[iv(lo, hi) for lo, hi in row] for row in rows])

    @classmethod
    def from_bounds(cls, lower: PointMatrix, upper: PointMatrix) -> "IntervalMatrix":
        if (lower.rows, lower.cols) != (upper.rows, upper.cols):
            raise ValueError("bound matrices differ in shape")
        return cls(lower.rows, lower.cols,
                   tuple(tuple(Interval(lower[i, j], upper[i, j]) for j in range(lower.cols))
                         for i in range(lower.rows)))

    def __getitem__(self, ij) -> Interval:
        i, j = ij
        return self.entries[i][j]

    @property
    def is_empty(self) -> bool:
        return self.rows == 0 or self.cols == 0

    def transpose(self) -> "IntervalMatrix":
        return IntervalMatrix(self.cols, self.rows,
                              tuple(tuple(self.entries[i][j] for i in range(self.rows))
                                    for j in range(self.cols)))

    def submatrix(self, row_idx: Iterable[int], col_idx: Iterable[int]) -> "IntervalMatrix":
        row_idx, col_idx = tuple(row_idx), tuple(col_idx)
        return IntervalMatrix(len(row_idx), len(col_idx),
                              tuple(tuple(self.entries[i][j] for j in col_idx) for i in row_idx))

    def lower(self) -> PointMatrix:
        return PointMatrix(self.rows, self.cols,
                           tuple(tuple(e.lo for e in row) for row in self.entries))

    def upper(self) -> PointMatrix:
        return PointMatrix(self.rows, self.cols,
                           tuple(tuple(e.hi for e in row) for row in self.entries))

    def midpoint(self) -> PointMatrix:
        return PointMatrix(self.rows, self.cols,
                           tuple(tuple(e.midpoint() for e in row) for row in self.entries))

    def positions(self):
        for i in range(self.rows):
            for j in range(self.cols):
                yield i, j


def matrix_contains(mu: IntervalMatrix, a: PointMatrix) -> bool:
    """Entrywise closed-interval membership (dimension mismatch is an error)."""
    if (mu.rows, mu.cols) != (a.rows, a.cols):
        raise ValueError(f"shape mismatch: {mu.rows}x{mu.cols} vs {a.rows}x{a.cols}")
    return all(mu[i, j].contains(a[i, j]) for i, j in mu.positions())


def _integer_rows(a: PointMatrix):
    # Scale each row to integers (rank is invariant under row scaling).
    out = []
    for row in a.entries:
        denom_lcm = 1
        for x in row:
            d = x.denominator
            denom_lcm = denom_lcm * d // gcd(denom_lcm, d)
        out.append([(x * denom_lcm).numerator for x in row])
    return out


def exact_rank(a: PointMatrix) -> int:
    """Rank over the rationals by exact fraction-free elimination."""
    m = _integer_rows(a)
    rows, cols = a.rows, a.cols
    rank = 0
    for col in range(cols):
        pivot_row = next((r for r in range(rank, rows) if m[r][col] != 0), None)
        if pivot_row is None:
            continue
        m[rank], m[pivot_row] = m[pivot_row], m[rank]
        pivot = m[rank][col]
        for r in range(rank + 1, rows):
            factor = m[r][col]
            if factor == 0:
                continue
            row = [pivot * m[r][c] - factor * m[rank][c] for c in range(cols)]
            g = 0
            for x in row:
                g = gcd(g, abs(x))
            if g > 1:
                row = [x // g for x in row]
            m[r] = row
        rank += 1
        if rank == rows:
            break
    return rank


def exact_det(a: PointMatrix) -> Fraction:
    """Exact determinant of a square rational matrix (det of 0x0 is 1)."""
    if a.rows != a.cols:
        raise ValueError("determinant of a non-square matrix")
    n = a.rows
    m = [list(row) for row in a.entries]
    det = Fraction(1)
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != col:
            m[col], m[pivot_row] = m[pivot_row], m[col]
            det = -det
        pivot = m[col][col]
        det *= pivot
        for r in range(col + 1, n):
            factor = m[r][col] / pivot
            if factor == 0:
                continue
            m[r] = [m[r][c] - factor * m[col][c] for c in range(n)]
    return det


def zero_matrix(rows: int, cols: int) -> PointMatrix:
    z = Fraction(0)
    return PointMatrix(rows, cols, tuple(tuple(z for _ in range(cols)) for _ in range(rows)))
