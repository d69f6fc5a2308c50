from .conjugate import JacobiTrajectory, conjugate_points, jacobi_fields_ode, zero_background
from .hessian import (
    hessian_identity_residual,
    jacobi_matches_linearization,
    jacobi_operator,
    second_variation_density,
)
from .operator import (
    LinearDiffOperator,
    SelfAdjointReport,
    compose,
    formal_adjoint,
    linearize,
    self_adjoint_report,
)

__all__ = [
    "JacobiTrajectory",
    "LinearDiffOperator",
    "SelfAdjointReport",
    "compose",
    "conjugate_points",
    "formal_adjoint",
    "hessian_identity_residual",
    "jacobi_fields_ode",
    "jacobi_matches_linearization",
    "jacobi_operator",
    "linearize",
    "second_variation_density",
    "self_adjoint_report",
    "zero_background",
]
