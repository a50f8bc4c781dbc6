"""p-adic functionals on finite-rank torsion-free abelian groups."""

from .classify import (
    QuotientInvariants,
    Rank1Type,
    RationalMatrix,
    Verdict,
    gram_cross_check,
    hom_check,
    iso_check,
    phi_p,
    quotient_structure,
    rank1_iso,
    rank1_type,
    rank1_witness,
)
from .errors import (
    DimensionMismatch,
    InvalidForm,
    NonUnit,
    NotAMember,
    NotASimpleRoot,
    NotContractive,
    NotFound,
    PadicError,
    PrecisionExhausted,
    PrimeMismatch,
    SingularMatrix,
)
from .functionals import Functional, admissible_values, evaluate, extend_from_subgroup, separating_functional
from .groups import (
    ZERO_ROW,
    FactoredForm,
    InductiveLimitGroup,
    PMetric,
    Simplicity,
    dual_from_inductive_limit,
    divisible,
    element,
    factored_form_of_inductive_limit,
    in_Gp_at_precision,
    is_p_simple,
    membership,
    p_metric,
    validate_factored_form,
)
from .linalg import (
    NormalForm,
    PadicMatrix,
    column_span_dense,
    is_gl_zp,
    row_span_member,
    smith_normal_form,
    solve_unit_system,
    stable_row_module,
)
from .padic import (
    DEFAULT_PRECISION,
    AtLeast,
    Disk,
    PadicInt,
    PadicPoly,
    PadicScalarQ,
    disk_intersect,
    hensel_lift,
    invert,
    newton_polygon,
    padic_arith,
    parse_padic_literal,
    val,
    vec_norm,
)

__version__ = "0.1.0"
