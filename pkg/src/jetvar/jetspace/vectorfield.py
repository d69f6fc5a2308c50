"""Projectable vector fields, their vertical parts and prolongations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence

from ..errors import JetvarError, OrderOverflowError
from ..symexpr.coords import BASE, CONST, FIELD
from ..symexpr.expr import Expr, check_same_space
from .derivatives import total_derivative
from .space import JetSpace, MultiIndex


@dataclass(frozen=True)
class ProjectableVectorField:
    """``xi^mu(x) d/dx^mu + Xi^a(x, jets) d/dy^a``.

    ``xi`` may depend on base coordinates and constants only; ``Xi`` on base
    coordinates, field jets and constants.
    """

    space: JetSpace
    xi: tuple
    Xi: tuple

    def __init__(self, space: JetSpace, xi: Sequence[Expr | int], Xi: Sequence[Expr | int]):
        xi = tuple(_as_expr(space, e) for e in xi)
        Xi = tuple(_as_expr(space, e) for e in Xi)
        if len(xi) != space.n:
            raise JetvarError(f"expected {space.n} base components, got {len(xi)}")
        if len(Xi) != space.m:
            raise JetvarError(f"expected {space.m} fiber components, got {len(Xi)}")
        for e in xi:
            bad = [c.name for c in e.variables() if c.kind not in (BASE, CONST)]
            if bad:
                raise JetvarError(f"base component depends on {', '.join(bad)}; the field is not projectable")
        for e in Xi:
            bad = [c.name for c in e.variables() if c.kind not in (BASE, CONST, FIELD)]
            if bad:
                raise JetvarError(f"fiber component depends on parameters {', '.join(bad)}")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "Xi", Xi)

    @classmethod
    def zero(cls, space: JetSpace) -> "ProjectableVectorField":
        return cls(space, [0] * space.n, [0] * space.m)

    @classmethod
    def translation(cls, space: JetSpace, mu: int) -> "ProjectableVectorField":
        xi = [0] * space.n
        xi[mu] = 1
        return cls(space, xi, [0] * space.m)

    @property
    def is_vertical(self) -> bool:
        return all(e.is_zero for e in self.xi)

    @property
    def order(self) -> int:
        """Jet order of the vertical part (one as soon as ``xi`` is nonzero)."""
        k = max((e.jet_order() for e in self.Xi), default=0)
        return k if self.is_vertical else max(k, 1)

    def __add__(self, other: "ProjectableVectorField") -> "ProjectableVectorField":
        return ProjectableVectorField(self.space, [a + b for a, b in zip(self.xi, other.xi)],
                                      [a + b for a, b in zip(self.Xi, other.Xi)])

    def scale(self, c) -> "ProjectableVectorField":
        return ProjectableVectorField(self.space, [c * a for a in self.xi], [c * a for a in self.Xi])


def _as_expr(space: JetSpace, e) -> Expr:
    if isinstance(e, Expr):
        if e.space is not space:
            check_same_space(space.zero(), e)
        return e
    if isinstance(e, str):
        return space.parse(e)
    return space.const(e)


def vertical_part(V: ProjectableVectorField) -> List[Expr]:
    """``v^a = Xi^a - y^a_nu xi^nu``; the generalized Lie derivative is ``-v``."""
    space = V.space
    out = []
    for a, Xa in enumerate(V.Xi):
        v = Xa
        for nu, xn in enumerate(V.xi):
            if not xn.is_zero:
                v = v - space.var(space.field(a, MultiIndex.unit(space.n, nu))) * xn
        out.append(v)
    return out


def generalized_lie_derivative(V: ProjectableVectorField) -> List[Expr]:
    """Lie derivative of sections along ``V``: minus the vertical part."""
    return [-v for v in vertical_part(V)]


def jets_of(v: Expr, s: int) -> Dict[MultiIndex, Expr]:
    """``D_alpha v`` for every ``|alpha| <= s``, sharing intermediate results."""
    space = v.space
    out: Dict[MultiIndex, Expr] = {}
    for alpha in space.multi_indices(s):
        if alpha.order == 0:
            out[alpha] = v
            continue
        mu = alpha.smallest_direction()
        parent = MultiIndex(alpha[:mu] + (alpha[mu] - 1,) + alpha[mu + 1:])
        out[alpha] = total_derivative(out[parent], mu)
    return out


def prolong(V: ProjectableVectorField, s: int) -> List[Dict[MultiIndex, Expr]]:
    """Components ``Xi^a_alpha`` of the ``s``-th prolongation, per field.

    ``Xi^a_alpha = D_alpha(v^a) + y^a_{alpha+nu} xi^nu`` with ``v`` the
    vertical part, so ``Xi^a_() = Xi^a``.
    """
    space = V.space
    if s < 0:
        raise ValueError("prolongation order must be non-negative")
    budget = space.s_max - V.order
    if s > budget:
        raise OrderOverflowError(
            f"prolongation to order {s} needs jets of order {s + V.order} > {space.s_max}")
    out = []
    for a, va in enumerate(vertical_part(V)):
        comps = jets_of(va, s)
        for alpha in comps:
            extra = space.zero()
            for nu, xn in enumerate(V.xi):
                if not xn.is_zero:
                    extra = extra + space.var(space.field(a, alpha.add(nu))) * xn
            comps[alpha] = comps[alpha] + extra
        out.append(comps)
    return out
