"""Symmetries, Noether currents, gauge lifts and Bergmann--Bianchi identities."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Mapping, NamedTuple, Optional, Sequence, Tuple

from ..errors import JetvarError
from ..jetspace.derivatives import divergence, total_derivative
from ..jetspace.forms import HorizontalForm
from ..jetspace.space import JetSpace, MultiIndex
from ..jetspace.vectorfield import ProjectableVectorField, prolong, vertical_part
from ..symexpr.coords import BASE, FIELD, PARAM
from ..symexpr.expr import Expr, partial
from .lagrangian import (
    ELExpression,
    IdentityCheckError,
    Lagrangian,
    euler_lagrange,
    euler_operator,
    first_variation,
    require_order,
)


def lie_derivative_lagrangian(lam: Lagrangian, V: ProjectableVectorField) -> Expr:
    """Density of the Lie derivative of ``L dx`` along ``V``.

    ``pr(V)(L) + L * sum_mu D_mu xi^mu``; it vanishes iff ``V`` is a symmetry.
    """
    space = lam.space
    L = lam.density
    comps = prolong(V, lam.order)
    total = space.zero()
    for c in L.variables():
        if c.kind == BASE:
            xi = V.xi[c.owner]
            if not xi.is_zero:
                total = total + xi * partial(L, c)
        elif c.kind == FIELD:
            total = total + comps[c.owner][MultiIndex(c.index)] * partial(L, c)
    for mu, xi in enumerate(V.xi):
        if not xi.is_zero:
            total = total + L * total_derivative(xi, mu)
    return total


class NoetherCurrent(NamedTuple):
    current: HorizontalForm
    residual: Expr
    vertical: List[Expr]
    euler_lagrange: ELExpression

    @property
    def components(self) -> List[Expr]:
        return self.current.current_components()

    @property
    def is_symmetry(self) -> bool:
        return self.residual.is_zero


def noether_current(lam: Lagrangian, V: ProjectableVectorField) -> NoetherCurrent:
    """Current ``eps^mu`` = first-variation boundary term at ``v = vert(V)`` plus ``xi^mu L``.

    The off-shell identity ``div eps = residual - sum_a v^a E_a`` is checked
    before returning; ``residual`` is :func:`lie_derivative_lagrangian`.
    """
    space = lam.space
    v = vertical_part(V)
    fv = first_variation(lam, v)
    eps = [e + xi * lam.density for e, xi in zip(fv.current, V.xi)]
    residual = lie_derivative_lagrangian(lam, V)
    E = euler_lagrange(lam)
    contraction = space.zero()
    for va, Ea in zip(v, E):
        contraction = contraction + va * Ea
    if not (divergence(eps) - residual + contraction).is_zero:
        raise IdentityCheckError("Noether off-shell identity failed")
    return NoetherCurrent(HorizontalForm.current(eps), residual, v, E)


@dataclass(frozen=True)
class GaugeLift:
    """Parameter-linear vertical variations ``v^a = sum Z^{a alpha}_A D_alpha eps^A``.

    ``coefficients[a]`` maps ``(A, alpha)`` to ``Z^{a alpha}_A``; ``params``
    lists the parameter indices the lift uses (the order of the Bianchi
    identities returned for it).
    """

    space: JetSpace
    coefficients: Tuple[Mapping[Tuple[int, MultiIndex], Expr], ...]
    params: Tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        space = self.space
        if len(self.coefficients) != space.m:
            raise JetvarError(f"a lift needs coefficients for all {space.m} fields")
        clean = []
        for table in self.coefficients:
            row = {}
            for (A, alpha), z in table.items():
                if A not in self.params:
                    raise JetvarError(f"coefficient for undeclared lift parameter index {A}")
                if any(c.kind == PARAM for c in z.variables()):
                    raise JetvarError("lift coefficients may not depend on parameters")
                if not z.is_zero:
                    row[(A, MultiIndex(alpha))] = z
            clean.append(row)
        object.__setattr__(self, "coefficients", tuple(clean))

    @classmethod
    def from_variations(cls, space: JetSpace, variations: Sequence[Expr | str | int],
                        params: Optional[Sequence[int | str]] = None, name: str = "") -> "GaugeLift":
        """Read off ``Z`` from explicit ``v^a``, checking linearity in parameter jets."""
        vs = [space.parse(v) if isinstance(v, str) else (v if isinstance(v, Expr) else space.const(v))
              for v in variations]
        if len(vs) != space.m:
            raise JetvarError(f"expected {space.m} variations, got {len(vs)}")
        used = sorted({c.owner for v in vs for c in v.variables() if c.kind == PARAM})
        if params is None:
            pidx = tuple(used)
        else:
            pidx = tuple(space.param_names.index(p) if isinstance(p, str) else p for p in params)
            stray = set(used) - set(pidx)
            if stray:
                names = ", ".join(space.param_names[i] for i in sorted(stray))
                raise JetvarError(f"variations use parameters not declared for the lift: {names}")
        coefficients = []
        for v in vs:
            table = {}
            rebuilt = space.zero()
            for c in v.variables():
                if c.kind != PARAM:
                    continue
                z = partial(v, c)
                table[(c.owner, MultiIndex(c.index))] = z
                rebuilt = rebuilt + z * space.var(c)
            if rebuilt != v:
                raise JetvarError(f"variation {v} is not linear homogeneous in parameter jets")
            coefficients.append(table)
        return cls(space, tuple(coefficients), pidx, name)

    @classmethod
    def identity(cls, space: JetSpace, params: Optional[Sequence[int | str]] = None) -> "GaugeLift":
        """``v^a = eps^a``: one parameter per field (the first ``m`` by default)."""
        if params is None:
            if space.p < space.m:
                raise JetvarError(
                    f"the identity lift needs {space.m} parameters, the space declares {space.p}")
            params = range(space.m)
        pidx = tuple(space.param_names.index(p) if isinstance(p, str) else p for p in params)
        if len(pidx) != space.m:
            raise JetvarError("the identity lift needs exactly one parameter per field")
        zero = MultiIndex.zero(space.n)
        coeffs = tuple({(A, zero): space.const(1)} for A in pidx)
        return cls(space, coeffs, pidx, "identity")

    @property
    def order(self) -> int:
        return max((alpha.order for t in self.coefficients for (_, alpha) in t), default=0)

    def variation(self) -> List[Expr]:
        space = self.space
        out = []
        for table in self.coefficients:
            v = space.zero()
            for (A, alpha), z in table.items():
                v = v + z * space.var(space.param(A, alpha))
            out.append(v)
        return out

    def __add__(self, other: "GaugeLift") -> "GaugeLift":
        params = tuple(sorted(set(self.params) | set(other.params)))
        coeffs = []
        for t1, t2 in zip(self.coefficients, other.coefficients):
            t = dict(t1)
            for k, z in t2.items():
                t[k] = t[k] + z if k in t else z
            coeffs.append(t)
        return GaugeLift(self.space, tuple(coeffs), params)

    def scale(self, c) -> "GaugeLift":
        return GaugeLift(self.space, tuple({k: c * z for k, z in t.items()} for t in self.coefficients),
                         self.params)


def contracted_lagrangian(E: Sequence[Expr], Z: GaugeLift) -> Expr:
    """``omega = sum_a v^a(eps) E_a``, a Lagrangian on the extended space."""
    total = Z.space.zero()
    for va, Ea in zip(Z.variation(), E):
        if not va.is_zero:
            total = total + va * Ea
    return total


def bianchi_identities(lam: Lagrangian, Z: GaugeLift) -> List[Expr]:
    """Euler operator in the lift's parameter directions applied to ``omega``.

    Returned in the order of ``Z.params``; all zero exactly when the lift
    generates Noether (gauge) identities of ``lam``.
    """
    space = lam.space
    require_order(space, 2 * lam.order + Z.order, "bianchi_identities")
    E = euler_lagrange(lam)
    omega = contracted_lagrangian(E, Z)
    beta = euler_operator(omega, PARAM)
    return [beta[A] for A in Z.params]
