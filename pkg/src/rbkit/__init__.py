"""Exact symbolic and numeric toolkit for the soliton vector fields of the
hyperbolic upper half-space: Killing and soliton residuals, dual-form
calculus, contact criteria, Lie-algebra closure, and closed-form flows."""

from .errors import (
    BoundaryEscape,
    BoundaryPoint,
    DegeneratePoint,
    DimensionMismatch,
    GradeOverflow,
    IndexOutOfRange,
    NonFinite,
    NotClosed,
    OddSize,
    ParseError,
    RBKitError,
)
from .exterior import (
    KForm,
    VectorField,
    ext_d,
    interior,
    lie_derivative_form,
    power_wedge,
    wedge,
)
from .flows import (
    FlowSpec,
    FlowState,
    closed_flow,
    flow_compare,
    integrate,
    isometry_check,
    write_trajectory_csv,
)
from .halfspace import (
    SolitonParams,
    SymTensor2,
    christoffel,
    flat,
    hyp_distance,
    inverse_metric,
    lie_derivative_metric,
    metric,
    random_params,
    rb_residual,
    ricci,
    scalar_curvature,
    soliton_lambda,
)
from .ratlaurent import LaurentPoly, Rational, parse_rational
from .solitons import (
    AlgebraSpan,
    ClosureReport,
    ContactMatrix,
    ContactReport,
    algebra_closure,
    build_field,
    contact_matrix,
    contact_report,
    contact_top_form,
    decompose,
    det_cofactor,
    det_via_pf,
    generator,
    in_span,
    lie_bracket,
    one_hot_params,
    pfaffian,
    reeb_defect,
    sl2_check,
    span_coefficients,
    structure_constants,
)

__version__ = "0.1.0"
