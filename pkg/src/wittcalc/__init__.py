"""Exact Witt-vector arithmetic on truncation sets in N^n, with K-group and
rank calculators for truncated polynomial rings."""

from .errors import BudgetExceeded, DomainError
from .ktheory import (
    AbelianGroup,
    HypothesisViolation,
    ProblemSpec,
    e1_full,
    e1_hat,
    khat_brute,
    khat_group,
    khat_order_exponent,
    khat_report,
    ktilde_groups,
    tf_group,
    tf_group_in_degree,
    witt_group_over_finite_field,
)
from .lattice import (
    EuclidFactorization,
    InternalVerificationFailure,
    UnimodularMatrix,
    euclid_factorize,
    torus_reduce,
)
from .rings import (
    MultiPoly,
    NonIntegralDivision,
    Ring,
    RingConstructionError,
    RingDescriptor,
    div_exact,
    finite_field,
    integers,
    integers_mod,
    polynomial_ring,
    rationals,
    ring_make,
)
from .truncation import (
    OrbitDecomposition,
    TruncationSet,
    cardinality_formula,
    closure,
    decompose,
    divides,
    line_intersect,
    p_line,
    quotient,
    span_intersect_points,
    sq_set,
)
from .witt import (
    UniversalPolynomialTable,
    WittVector,
    frobenius,
    ghost,
    ghost_inverse,
    p_typical_assemble,
    p_typical_split,
    restrict,
    universal_polys,
    verschiebung,
    witt_add,
    witt_from_json,
    witt_int_mul,
    witt_mul,
    witt_neg,
    witt_one,
    witt_sub,
    witt_to_json,
    witt_vector,
    witt_zero,
)
from .zrank import (
    PoincareSeries,
    k_rational_series,
    k_rational_series_oracle,
    tc_vertex_series,
    tc_vertex_series_oracle,
)

__version__ = "0.1.0"
