"""Minimal rank for interval matrices with at most 3 columns.

Rank 0 and rank 1 are settled by the rank_one module, and 2-column (or
2-row) matrices cannot exceed rank 2, so the only open question is
"2 or 3" for a reduced p x 3 matrix with p >= 3.  Some member then has
rank <= 2 iff one of its columns can be driven into the span of the
other two, with column 0 as the anchor:

    exists A in mu and lam, gam with  A[:, w] = lam*A[:, 0] + gam*A[:, v]

for (v, w) = (1, 2) or (2, 1).  For a fixed sign quadrant of
(lam, gam), per-row interval images turn this into a two-variable
system over lam, gam >= 0:

    lam*a_i + gam*b_i <= z_i      (reachable values dip below the top)
    lam*c_i + gam*d_i >= u_i      (and reach above the bottom)

Feasibility is decided two independent ways:

* ``two_var_feasible`` enumerates boundary intersections exactly; the
  nonnegativity constraints make the feasible region line-free, so it
  is nonempty iff some pairwise intersection of constraint boundaries
  (axes included) satisfies everything;
* ``sign_condition_feasible`` checks closed-form sign conditions
  obtained by eliminating lam and then gam by hand, valid when the
  lam-coefficients are nonnegative with at least one nonzero per side.

Batch (numpy, exact in int64 for small integer grids) variants of both
are provided for exhaustive sweeps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .intervals import Interval, IntervalMatrix, PointMatrix
from .max_rank import maximal_rank
from .preprocess import (
    embed_in_original,
    flip_point_rows,
    normalize_col0_rows,
    reduce_matrix,
    split_cases,
    straddling_positions,
)
from .rank_one import (
    SplitCapExceeded,
    contains_rank_one,
    contains_zero_matrix,
    find_rank_one,
)


class NotApplicableError(ValueError):
    """The closed-form sign conditions do not cover this system."""


@dataclass(frozen=True)
class TwoVarSystem:
    """lower rows (a, b, z): lam*a + gam*b <= z;
    upper rows (c, d, u): lam*c + gam*d >= u;  lam, gam >= 0."""

    lower: tuple
    upper: tuple


def system_constraints(sys: TwoVarSystem):
    """The system as halfplanes alpha*lam + beta*gam <= delta,
    nonnegativity included."""
    rows = [(Fraction(-1), Fraction(0), Fraction(0)),
            (Fraction(0), Fraction(-1), Fraction(0))]
    rows += [(Fraction(a), Fraction(b), Fraction(z)) for a, b, z in sys.lower]
    rows += [(Fraction(-c), Fraction(-d), Fraction(-u)) for c, d, u in sys.upper]
    return rows


def two_var_feasible(sys: TwoVarSystem) -> Optional[Tuple[Fraction, Fraction]]:
    """A feasible (lam, gam), or None.

    Candidates are the pairwise intersections of constraint boundary
    lines.  Completeness: the region lies in the first quadrant, hence
    contains no line, hence is nonempty iff it has an extreme point, and
    a 2D extreme point lies on two independent active boundaries.
    """
    rows = system_constraints(sys)
    n = len(rows)
    for x in range(n):
        ax, bx, dx = rows[x]
        for y in range(x + 1, n):
            ay, by, dy = rows[y]
            det = ax * by - ay * bx
            if det == 0:
                continue
            lam = (dx * by - dy * bx) / det
            gam = (ax * dy - ay * dx) / det
            if all(a * lam + b * gam <= d for a, b, d in rows):
                return lam, gam
    return None


def nonneg_multiplier_feasible(xs: Sequence, ys: Sequence) -> bool:
    """Is there gam >= 0 with gam*x_i >= y_i for every i?

    Holds iff x_i <= 0 implies y_i <= 0, and the derived bounds are
    compatible: y_j*x_i >= y_i*x_j whenever x_j > 0 > x_i.
    """
    if len(xs) != len(ys):
        raise ValueError("coefficient lists differ in length")
    pairs = [(Fraction(x), Fraction(y)) for x, y in zip(xs, ys)]
    for x, y in pairs:
        if x <= 0 and y > 0:
            return False
    for xj, yj in pairs:
        if xj <= 0:
            continue
        for xi, yi in pairs:
            if xi < 0 and yj * xi < yi * xj:
                return False
    return True


def sign_condition_feasible(sys: TwoVarSystem) -> bool:
    """Closed-form feasibility of a TwoVarSystem.

    Requires every lam-coefficient nonnegative and at least one nonzero
    on each side (NotApplicableError otherwise; callers then fall back
    to two_var_feasible).  Cross-validated against vertex enumeration;
    never used as the decider inside the rank pipeline.
    """
    lower = [(Fraction(a), Fraction(b), Fraction(z)) for a, b, z in sys.lower]
    upper = [(Fraction(c), Fraction(d), Fraction(u)) for c, d, u in sys.upper]
    if any(a < 0 for a, _, _ in lower) or any(c < 0 for c, _, _ in upper):
        raise NotApplicableError("negative lam-coefficient")
    if not any(a > 0 for a, _, _ in lower) or not any(c > 0 for c, _, _ in upper):
        raise NotApplicableError("a side has no positive lam-coefficient")

    for _, b, z in lower:
        if b >= 0 and z < 0:
            return False
    for _, bi, zi in lower:
        for _, bj, zj in lower:
            if bi > 0 and bj < 0 and bi * zj < bj * zi:
                return False

    def e_term(i, r):
        a, b, _ = lower[i]
        c, d, _ = upper[r]
        return a * d - b * c

    def f_term(i, r):
        a, _, z = lower[i]
        c, _, u = upper[r]
        return a * u - c * z

    pairs = [(i, r) for i in range(len(lower)) for r in range(len(upper))]
    for i, r in pairs:
        if e_term(i, r) <= 0 and f_term(i, r) > 0:
            return False
    for (i, r), (j, s) in itertools.product(pairs, pairs):
        e_ir, e_js = e_term(i, r), e_term(j, s)
        if e_ir < 0 and e_js > 0 and e_ir * f_term(j, s) < e_js * f_term(i, r):
            return False
    for j, (_, bj, zj) in enumerate(lower):
        for i, r in pairs:
            e_ir = e_term(i, r)
            if bj < 0 and e_ir < 0 and zj * e_ir > bj * f_term(i, r):
                return False
            if bj > 0 and e_ir > 0 and zj * e_ir < bj * f_term(i, r):
                return False
    return True


_BATCH_LIMIT = 10 ** 6  # keeps every int64 product below overflow


def _batch_arrays(*arrays):
    out = [np.asarray(arr, dtype=np.int64) for arr in arrays]
    shape = out[0].shape
    if any(a.shape != shape for a in out):
        raise ValueError("batch arrays must share one (N, k) shape")
    if max(int(np.abs(a).max(initial=0)) for a in out) > _BATCH_LIMIT:
        raise ValueError("batch entries too large for exact int64 evaluation")
    return out


def sign_condition_feasible_batch(a, b, z, c, d, u) -> np.ndarray:
    """Vectorized sign_condition_feasible over (N, k) integer arrays."""
    a, b, z, c, d, u = _batch_arrays(a, b, z, c, d, u)
    if (a < 0).any() or (c < 0).any():
        raise NotApplicableError("negative lam-coefficient")
    if (~(a > 0).any(axis=1)).any() or (~(c > 0).any(axis=1)).any():
        raise NotApplicableError("a side has no positive lam-coefficient")
    n, k = a.shape
    ok = np.ones(n, dtype=bool)
    ok &= ~((b >= 0) & (z < 0)).any(axis=1)
    for i in range(k):
        for j in range(k):
            ok &= ~((b[:, i] > 0) & (b[:, j] < 0)
                    & (b[:, i] * z[:, j] < b[:, j] * z[:, i]))
    # Evaluate the cross conditions only on the systems still alive.
    alive = np.flatnonzero(ok)
    if alive.size == 0:
        return ok
    a, b, z = a[alive], b[alive], z[alive]
    c, d, u = c[alive], d[alive], u[alive]
    e = a[:, :, None] * d[:, None, :] - b[:, :, None] * c[:, None, :]
    f = a[:, :, None] * u[:, None, :] - c[:, None, :] * z[:, :, None]
    sub = ~((e <= 0) & (f > 0)).any(axis=(1, 2))
    ef = e.reshape(len(alive), -1)
    ff = f.reshape(len(alive), -1)
    for x in range(ef.shape[1]):
        for y in range(ef.shape[1]):
            sub &= ~((ef[:, x] < 0) & (ef[:, y] > 0)
                     & (ef[:, x] * ff[:, y] < ef[:, y] * ff[:, x]))
    for j in range(k):
        bj = b[:, j, None, None]
        zj = z[:, j, None, None]
        sub &= ~((bj < 0) & (e < 0) & (zj * e > bj * f)).any(axis=(1, 2))
        sub &= ~((bj > 0) & (e > 0) & (zj * e < bj * f)).any(axis=(1, 2))
    ok[alive] = sub
    return ok


def two_var_feasible_batch(a, b, z, c, d, u) -> np.ndarray:
    """Vectorized two_var_feasible over (N, k) integer arrays."""
    a, b, z, c, d, u = _batch_arrays(a, b, z, c, d, u)
    n, k = a.shape
    small = max(int(np.abs(arr).max(initial=0)) for arr in (a, b, z, c, d, u)) <= 500
    dtype = np.int32 if small else np.int64  # worst slack is 6*B^3 < 2^31 at B=500
    ones = np.ones((n, 1), dtype=dtype)
    zeros = np.zeros((n, 1), dtype=dtype)
    al = np.concatenate([-ones, zeros, a.astype(dtype), -c.astype(dtype)], axis=1)
    be = np.concatenate([zeros, -ones, b.astype(dtype), -d.astype(dtype)], axis=1)
    de = np.concatenate([zeros, zeros, z.astype(dtype), -u.astype(dtype)], axis=1)
    m = al.shape[1]
    feasible = np.zeros(n, dtype=bool)
    remaining = np.arange(n)
    for x in range(m):
        for y in range(x + 1, m):
            det = al[:, x] * be[:, y] - al[:, y] * be[:, x]
            ok = det != 0
            if not ok.any():
                continue
            lam_num = de[:, x] * be[:, y] - de[:, y] * be[:, x]
            gam_num = al[:, x] * de[:, y] - al[:, y] * de[:, x]
            sign = np.sign(det)
            for r in range(m):
                if r == x or r == y:
                    continue  # defining constraints hold with equality
                slack = (al[:, r] * lam_num + be[:, r] * gam_num - de[:, r] * det) * sign
                ok &= slack <= 0
                if not ok.any():
                    break
            if not ok.any():
                continue
            feasible[remaining[ok]] = True
            keep = ~ok
            remaining = remaining[keep]
            if remaining.size == 0:
                return feasible
            al, be, de = al[keep], be[keep], de[keep]
    return feasible


# Sign quadrants of (lam, gam) for the four systems of the span test.
_CASE_SIGNS = {1: (1, 1), 2: (1, -1), 3: (-1, 1), 4: (-1, -1)}


def span_case_system(mu: IntervalMatrix, v: int, w: int, case: int) -> TwoVarSystem:
    """Two-variable system expressing A[:, w] = lam*A[:,0] + gam*A[:,v]
    restricted to the given sign quadrant, rewritten for lam, gam >= 0.

    For each row, the reachable values of lam*x + gam*y over the entry
    boxes form an interval; it must meet the column-w entry, giving one
    lower and one upper row per matrix row.
    """
    s_lam, s_gam = _CASE_SIGNS[case]
    lower, upper = [], []
    for i in range(mu.rows):
        x, y, t = mu[i, 0], mu[i, v], mu[i, w]
        a = x.lo if s_lam > 0 else -x.hi
        b = y.lo if s_gam > 0 else -y.hi
        c = x.hi if s_lam > 0 else -x.lo
        d = y.hi if s_gam > 0 else -y.lo
        lower.append((a, b, t.hi))
        upper.append((c, d, t.lo))
    return TwoVarSystem(tuple(lower), tuple(upper))


@dataclass(frozen=True)
class Rank2Certificate:
    """Feasible span representation: column w = lam*col0 + gam*col v,
    realized by ``matrix`` (a member of the matrix it was built from)."""

    v: int
    w: int
    case: int
    lam: Fraction
    gam: Fraction
    matrix: PointMatrix


def _validate_col3_reduced_nonneg(mu: IntervalMatrix):
    if mu.cols != 3:
        raise ValueError("span test expects exactly 3 columns")
    for i in range(mu.rows):
        if mu[i, 0].lo < 0:
            raise ValueError("column 0 must be entrywise nonnegative")


def _span_systems(mu: IntervalMatrix):
    for v, w in ((1, 2), (2, 1)):
        for case in (1, 2, 3, 4):
            yield v, w, case, span_case_system(mu, v, w, case)


def contains_rank_le_2(mu: IntervalMatrix) -> bool:
    """Whether some member of a reduced p x 3 matrix (column 0
    nonnegative) has rank at most 2."""
    _validate_col3_reduced_nonneg(mu)
    if mu.rows <= 2:
        return True
    return any(two_var_feasible(sys) is not None for _, _, _, sys in _span_systems(mu))


def _solve_affine(lam: Fraction, gam: Fraction, x_iv: Interval, y_iv: Interval, t: Fraction):
    # A point (x, y) of the box with lam*x + gam*y == t; t is reachable.
    if lam == 0 and gam == 0:
        return x_iv.lo, y_iv.lo
    if gam == 0:
        return t / lam, y_iv.lo
    if lam == 0:
        return x_iv.lo, t / gam
    low = t - gam * (y_iv.hi if gam > 0 else y_iv.lo)   # lam*x >= low
    high = t - gam * (y_iv.lo if gam > 0 else y_iv.hi)  # lam*x <= high
    xl, xh = sorted((low / lam, high / lam))
    x = max(x_iv.lo, xl)
    y = (t - lam * x) / gam
    return x, y


def rank_le_2_certificate(mu: IntervalMatrix) -> Optional[Rank2Certificate]:
    """First feasible span system in the fixed order (v,w)=(1,2) then
    (2,1), cases 1..4, realized into a member matrix of rank <= 2."""
    _validate_col3_reduced_nonneg(mu)
    for v, w, case, sys in _span_systems(mu):
        point = two_var_feasible(sys)
        if point is None:
            continue
        s_lam, s_gam = _CASE_SIGNS[case]
        lam, gam = s_lam * point[0], s_gam * point[1]
        grid = [[None] * 3 for _ in range(mu.rows)]
        for i in range(mu.rows):
            x_iv, y_iv, t_iv = mu[i, 0], mu[i, v], mu[i, w]
            t_lo = (lam * (x_iv.lo if lam >= 0 else x_iv.hi)
                    + gam * (y_iv.lo if gam >= 0 else y_iv.hi))
            t = max(t_lo, t_iv.lo)
            x, y = _solve_affine(lam, gam, x_iv, y_iv, t)
            grid[i][0], grid[i][v], grid[i][w] = x, y, t
        matrix = PointMatrix(mu.rows, 3, tuple(tuple(row) for row in grid))
        return Rank2Certificate(v, w, case, lam, gam, matrix)
    return None


def _col0_cases(mu: IntervalMatrix, split_cap=None):
    """Column-0 splits of a reduced matrix, rows flipped nonnegative."""
    positions = straddling_positions(mu, column=0)
    if split_cap is not None and len(positions) > split_cap:
        raise SplitCapExceeded(
            f"{len(positions)} straddling column-0 entries exceed the split cap {split_cap}")
    for split in split_cases(mu, positions):
        yield split, normalize_col0_rows(split.matrix)


def minimal_rank(mu: IntervalMatrix, split_cap=None) -> int:
    """Exact minimal rank for matrices with at most 3 columns."""
    return _minimal_rank_impl(mu, want_witness=False, split_cap=split_cap)[0]


def minimal_rank_witness(mu: IntervalMatrix, split_cap=None):
    """(minimal rank, member attaining it)."""
    return _minimal_rank_impl(mu, want_witness=True, split_cap=split_cap)


def _minimal_rank_impl(mu: IntervalMatrix, want_witness: bool, split_cap=None):
    if mu.cols > 3:
        raise ValueError("minimal rank is only decided for at most 3 columns")
    if contains_zero_matrix(mu):
        zero = Fraction(0)
        witness = PointMatrix(mu.rows, mu.cols,
                              tuple(tuple(zero for _ in range(mu.cols))
                                    for _ in range(mu.rows))) if want_witness else None
        return 0, witness
    if contains_rank_one(mu, split_cap=split_cap):
        return 1, (find_rank_one(mu, split_cap) if want_witness else None)
    # minimal rank is now >= 2; with min(p, q) <= 2 every member has
    # rank exactly 2, so any member is a witness.
    if min(mu.rows, mu.cols) <= 2:
        return 2, (mu.midpoint() if want_witness else None)
    red = reduce_matrix(mu)
    if red.matrix.rows <= 2 or red.matrix.cols <= 2:
        witness = None
        if want_witness:
            witness = embed_in_original(red.matrix.midpoint(), mu.rows, mu.cols,
                                        red.kept_rows, red.kept_cols)
        return 2, witness
    for split, case in _col0_cases(red.matrix, split_cap):
        if want_witness:
            cert = rank_le_2_certificate(case.matrix)
            if cert is None:
                continue
            local = flip_point_rows(cert.matrix, case.row_flips)
            witness = embed_in_original(local, mu.rows, mu.cols,
                                        red.kept_rows, red.kept_cols)
            return 2, witness
        if contains_rank_le_2(case.matrix):
            return 2, None
    return 3, (mu.midpoint() if want_witness else None)


@dataclass(frozen=True)
class RankRange:
    """Attainable ranks form the integer interval [min, max]."""

    min: int
    max: int

    def __post_init__(self):
        if self.min > self.max:
            raise ValueError("rank range out of order")

    def members(self):
        return tuple(range(self.min, self.max + 1))


def rank_range(mu: IntervalMatrix) -> RankRange:
    """Exact rank range for matrices with at most 3 columns."""
    return RankRange(minimal_rank(mu), maximal_rank(mu))
