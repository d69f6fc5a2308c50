"""Second variation, the Jacobi operator on gauge parameters, and the Hessian identity."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence

from ..errors import JetvarError
from ..jetspace.vectorfield import jets_of
from ..symexpr.coords import FIELD, PARAM
from ..symexpr.expr import Expr, partial
from ..variational.lagrangian import (
    Lagrangian,
    _jet_table,
    euler_lagrange,
    euler_operator,
    require_order,
)
from ..variational.noether import GaugeLift
from .operator import LinearDiffOperator, linearize


def _as_variation(lam: Lagrangian, v: Sequence[Expr | str | int]) -> List[Expr]:
    space = lam.space
    if len(v) != space.m:
        raise JetvarError(f"expected {space.m} variation components, got {len(v)}")
    return [space.parse(x) if isinstance(x, str) else (x if isinstance(x, Expr) else space.const(x))
            for x in v]


def second_variation_density(lam: Lagrangian, v: Sequence[Expr | str | int]) -> Expr:
    """``d^2/dt^2 L(y + t v)`` at ``t = 0``.

    Equals ``sum ddL/dy^a_alpha dy^b_beta * D_alpha v^a * D_beta v^b``; the
    components of ``v`` are expected to be linear in parameter jets.
    """
    space = lam.space
    v = _as_variation(lam, v)
    s = lam.order
    vorder = max((x.jet_order() for x in v), default=0)
    require_order(space, s + vorder, "second_variation_density")
    jets = [jets_of(x, s) if not x.is_zero else None for x in v]

    first = _jet_table(lam.density, FIELD, space.m)
    total = space.zero()
    for a, terms in enumerate(first):
        if jets[a] is None:
            continue
        for alpha, dL in terms.items():
            inner = space.zero()
            for b, row in enumerate(_jet_table(dL, FIELD, space.m)):
                if jets[b] is None:
                    continue
                for beta, ddL in row.items():
                    inner = inner + ddL * jets[b][beta]
            if not inner.is_zero:
                total = total + inner * jets[a][alpha]
    return total


def _parameter_operator(exprs: Sequence[Expr], params: Sequence[int]) -> LinearDiffOperator:
    """Coefficient table of expressions linear homogeneous in parameter jets."""
    space = exprs[0].space if exprs else None
    index = {A: i for i, A in enumerate(params)}
    coeffs = {}
    for r, e in enumerate(exprs):
        rebuilt = space.zero()
        for c in e.variables():
            if c.kind != PARAM:
                continue
            if c.owner not in index:
                raise JetvarError(f"unexpected parameter {space.param_names[c.owner]} in Jacobi operator")
            d = partial(e, c)
            coeffs[(r, index[c.owner], tuple(c.index))] = d
            rebuilt = rebuilt + d * space.var(c)
        if rebuilt != e:
            raise JetvarError("Jacobi operator is not linear in the gauge parameters")
    return LinearDiffOperator(space, len(exprs), len(params), coeffs)


def jacobi_operator(lam: Lagrangian, Z: Optional[GaugeLift] = None) -> LinearDiffOperator:
    """Half the parameter-direction Euler operator of the second variation along ``Z``.

    Rows and columns are indexed by ``Z.params``.  With the identity lift the
    result coincides with ``linearize(euler_lagrange(lam))``; use
    :func:`jacobi_matches_linearization` to assert that.
    """
    space = lam.space
    if Z is None:
        Z = GaugeLift.identity(space)
    s, k = lam.order, Z.order
    require_order(space, 2 * (s + k), "jacobi_operator")
    delta2 = second_variation_density(lam, Z.variation())
    ev = euler_operator(delta2, PARAM)
    half = [ev[A] * Fraction(1, 2) for A in Z.params]
    return _parameter_operator(half, Z.params)


def jacobi_matches_linearization(lam: Lagrangian, J: Optional[LinearDiffOperator] = None) -> bool:
    """Whether the identity-lift Jacobi operator equals the linearised Euler--Lagrange operator."""
    if J is None:
        J = jacobi_operator(lam)
    return J == linearize(euler_lagrange(lam))


def hessian_identity_residual(lam: Lagrangian, params: Optional[Sequence[int | str]] = None) -> List[Expr]:
    """``E_w(second variation along w) - 2 * linearize(E) w`` per field, ``w`` the identity lift."""
    space = lam.space
    Z = GaugeLift.identity(space, params)
    require_order(space, 2 * lam.order, "hessian_identity_residual")
    w = Z.variation()
    lhs = euler_operator(second_variation_density(lam, w), PARAM)
    rhs = linearize(euler_lagrange(lam)).apply(w)
    return [lhs[A] - 2 * r for A, r in zip(Z.params, rhs)]
