"""Exact combinatorics of t-intersecting families of (n,0)-subspaces.

The ambient space is V = F_q^(n+ell) with W spanned by the last ell
coordinates; a subspace U has type (dim U, dim(U ∩ W)).
"""

from .errors import (
    BadC,
    BudgetExceeded,
    DimensionMismatch,
    DivisionByZero,
    EmptyFamily,
    HypothesisViolated,
    InternalInconsistency,
    MalformedInput,
    NonCanonical,
    NonIntegral,
    NonPrimePower,
    NotNested,
    QxError,
    TypeViolation,
    UnsupportedOrder,
)
from .families import (
    Family,
    build_h1,
    build_h2,
    build_h3,
    build_star,
    common_dim,
    compatible_set,
    is_maximal,
    is_t_intersecting,
    is_trivial,
    restrict,
    t_set,
    tau_t,
)
from .field import FieldSpec, field_arith, make_field
from .qcount import (
    fprime,
    gauss,
    h1_size,
    h2_size,
    h3_size,
    nprime,
    theta,
)
from .space import SpaceContext, SubspaceType, enumerate_between, enumerate_typed, type_of
from .subspace import Subspace, canonicalize, contains, intersect, span_sum
from .verify import CheckSpec, Report, run_check, theorem13_compare

__version__ = "0.1.0"
