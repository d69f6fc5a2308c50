from .lagrangian import (
    ELExpression,
    FirstVariation,
    IdentityCheckError,
    Lagrangian,
    euler_lagrange,
    euler_operator,
    first_variation,
    prolonged_action,
    require_order,
)
from .noether import (
    GaugeLift,
    NoetherCurrent,
    bianchi_identities,
    contracted_lagrangian,
    lie_derivative_lagrangian,
    noether_current,
)
from .onshell import OnShellResult, is_on_shell_zero

__all__ = [
    "ELExpression",
    "FirstVariation",
    "GaugeLift",
    "IdentityCheckError",
    "Lagrangian",
    "NoetherCurrent",
    "OnShellResult",
    "bianchi_identities",
    "contracted_lagrangian",
    "euler_lagrange",
    "euler_operator",
    "first_variation",
    "is_on_shell_zero",
    "lie_derivative_lagrangian",
    "noether_current",
    "prolonged_action",
    "require_order",
]
