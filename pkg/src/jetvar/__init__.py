"""Symbolic variational calculus on finite-order jet spaces."""

from .errors import (
    AnsatzTooLargeError,
    DegenerateOperatorError,
    JetvarError,
    ModelFileError,
    NotSymmetricError,
    OrderOverflowError,
    ParseError,
    SpaceMismatchError,
    SpanningError,
    StructureConstantsError,
    UnboundVariableError,
    UndeclaredError,
)
from .jacobi import (
    LinearDiffOperator,
    SelfAdjointReport,
    compose,
    formal_adjoint,
    hessian_identity_residual,
    jacobi_fields_ode,
    jacobi_operator,
    linearize,
    second_variation_density,
    self_adjoint_report,
)
from .jetspace import (
    HorizontalForm,
    JetSpace,
    MultiIndex,
    ProjectableVectorField,
    d_H,
    d_V,
    prolong,
    total_derivative,
    total_derivative_multi,
    vertical_part,
)
from .reductive import (
    AlgebraOperator,
    LieAlgebra,
    bracket,
    certify,
    hypothesis_report,
    reductive_check,
    split,
)
from .symexpr import Expr, equals, eval_numeric, parse, partial, substitute
from .variational import (
    GaugeLift,
    Lagrangian,
    bianchi_identities,
    euler_lagrange,
    first_variation,
    is_on_shell_zero,
    lie_derivative_lagrangian,
    noether_current,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraOperator",
    "AnsatzTooLargeError",
    "DegenerateOperatorError",
    "Expr",
    "GaugeLift",
    "HorizontalForm",
    "JetSpace",
    "JetvarError",
    "Lagrangian",
    "LieAlgebra",
    "LinearDiffOperator",
    "ModelFileError",
    "MultiIndex",
    "NotSymmetricError",
    "OrderOverflowError",
    "ParseError",
    "ProjectableVectorField",
    "SelfAdjointReport",
    "SpaceMismatchError",
    "SpanningError",
    "StructureConstantsError",
    "UnboundVariableError",
    "UndeclaredError",
    "bianchi_identities",
    "bracket",
    "certify",
    "compose",
    "d_H",
    "d_V",
    "equals",
    "euler_lagrange",
    "eval_numeric",
    "first_variation",
    "formal_adjoint",
    "hessian_identity_residual",
    "hypothesis_report",
    "is_on_shell_zero",
    "jacobi_fields_ode",
    "jacobi_operator",
    "lie_derivative_lagrangian",
    "linearize",
    "noether_current",
    "parse",
    "partial",
    "prolong",
    "reductive_check",
    "second_variation_density",
    "self_adjoint_report",
    "split",
    "substitute",
    "total_derivative",
    "total_derivative_multi",
    "vertical_part",
]
