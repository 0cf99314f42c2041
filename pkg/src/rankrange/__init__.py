"""Exact rank ranges of interval matrices.

Decides rank-0/rank-1 containment for any shape, computes the maximal
attainable rank, and (for matrices with at most 3 columns) the exact
minimal rank and hence the full rank range.  Everything runs in exact
rational arithmetic, and every criterion-driven decision has an independent
brute-force oracle in :mod:`rankrange.oracle`.
"""

from .intervals import (
    Interval,
    IntervalClass,
    IntervalMatrix,
    PointMatrix,
    Rational,
    classify,
    exact_det,
    exact_rank,
    interval_add,
    interval_mul,
    interval_neg,
    iv,
    matrix_contains,
    scalar_mul,
    to_rational,
)
from .preprocess import (
    ReducedForm,
    SignCase,
    clamp_nonneg,
    normalize_first_line,
    reduce_matrix,
    sign_split_cases,
    split_cases,
)
from .rank_one import (
    ProductViolation,
    SplitCapExceeded,
    contains_rank_one,
    contains_rank_one_nonneg_reduced,
    contains_zero_matrix,
    find_rank_one,
    multiset_tuples,
    rank_one_necessary_overlap,
    rank_one_trace,
    exact_h_bound,
)
from .max_rank import (
    CenterRadius,
    PgDiagonal,
    center_radius,
    complementary_matrix,
    constant_diagonal_det,
    is_regular,
    maximal_rank,
    square_max_rank_is_full,
    totally_nonconstant_diagonals,
)
from .min_rank3 import (
    NotApplicableError,
    Rank2Certificate,
    RankRange,
    TwoVarSystem,
    contains_rank_le_2,
    minimal_rank,
    minimal_rank_witness,
    nonneg_multiplier_feasible,
    rank_le_2_certificate,
    rank_range,
    sign_condition_feasible,
    two_var_feasible,
)

__version__ = "0.1.0"
