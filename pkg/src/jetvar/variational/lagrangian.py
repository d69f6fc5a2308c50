"""Lagrangians, the Euler operator and the first-variation decomposition."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence

from ..errors import JetvarError, OrderOverflowError
from ..jetspace.derivatives import divergence, total_derivative
from ..jetspace.forms import HorizontalForm
from ..jetspace.space import JetSpace, MultiIndex
from ..jetspace.vectorfield import jets_of
from ..symexpr.coords import FIELD, PARAM
from ..symexpr.expr import Expr, partial


class IdentityCheckError(JetvarError):
    """An identity that holds by construction failed to normalise to zero."""


def require_order(space: JetSpace, needed: int, what: str) -> None:
    if needed > space.s_max:
        raise OrderOverflowError(
            f"{what} needs jets of order {needed}, but the space tracks only {space.s_max}")


@dataclass(frozen=True)
class Lagrangian:
    """A density ``L`` standing for the n-form ``L dx^1 ^ ... ^ dx^n``."""

    density: Expr
    order: int

    def __init__(self, density: Expr, order: Optional[int] = None):
        actual = max((c.order for c in density.variables() if c.kind == FIELD), default=0)
        if any(c.kind == PARAM for c in density.variables()):
            raise JetvarError("a Lagrangian may not depend on gauge parameters")
        if order is None:
            order = actual
        if order < actual:
            raise JetvarError(f"declared order {order} is below the jet order {actual} of the density")
        require_order(density.space, order, "the Lagrangian")
        object.__setattr__(self, "density", density)
        object.__setattr__(self, "order", order)

    @classmethod
    def parse(cls, space: JetSpace, text: str) -> "Lagrangian":
        return cls(space.parse(text))

    @property
    def space(self) -> JetSpace:
        return self.density.space

    def form(self) -> HorizontalForm:
        return HorizontalForm.density(self.density)

    def __str__(self) -> str:
        return str(self.density)


class ELExpression(tuple):
    """Euler--Lagrange expressions ``(E_1, ..., E_m)`` with an order bound."""

    def __new__(cls, components: Sequence[Expr], order: int):
        obj = super().__new__(cls, components)
        obj.order = order
        return obj

    @property
    def space(self) -> JetSpace:
        return self[0].space

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for e in self)

    def __repr__(self) -> str:
        return f"ELExpression([{', '.join(str(e) for e in self)}], order={self.order})"


def _jet_table(f: Expr, kind: str, count: int) -> List[Dict[MultiIndex, Expr]]:
    """``[{alpha: df/dz^A_alpha}]`` over the jets of kind ``kind`` present in ``f``."""
    table: List[Dict[MultiIndex, Expr]] = [{} for _ in range(count)]
    for c in f.variables():
        if c.kind == kind:
            d = partial(f, c)
            if not d.is_zero:
                table[c.owner][MultiIndex(c.index)] = d
    return table


def _strip_to_zero(terms: Dict[MultiIndex, Expr], n: int, on_boundary=None) -> Expr:
    """Collapse ``sum_alpha T_alpha D_alpha(.)`` to the undifferentiated slot.

    Each ``T_alpha`` with ``|alpha| >= 1`` is moved to ``alpha - mu`` as
    ``-D_mu T_alpha``, where ``mu`` is the smallest direction in ``alpha``;
    ``on_boundary(mu, beta, T_alpha)`` sees every stripping step so callers
    can collect the divergence term ``D_mu(T_alpha D_beta(.))``.
    """
    pending = dict(terms)
    while True:
        live = [a for a in pending if a.order > 0]
        if not live:
            break
        alpha = max(live, key=MultiIndex.sort_key)
        T = pending.pop(alpha)
        if T.is_zero:
            continue
        mu = alpha.smallest_direction()
        beta = MultiIndex(alpha[:mu] + (alpha[mu] - 1,) + alpha[mu + 1:])
        if on_boundary is not None:
            on_boundary(mu, beta, T)
        d = -total_derivative(T, mu)
        pending[beta] = pending[beta] + d if beta in pending else d
    zero = MultiIndex.zero(n)
    return pending.get(zero)


def euler_operator(f: Expr, kind: str = FIELD) -> List[Expr]:
    """``sum_alpha (-1)^|alpha| D_alpha (df/dz^A_alpha)`` for every owner ``A``.

    ``kind`` selects field jets (the usual Euler--Lagrange operator) or
    parameter jets (variational derivative in the gauge-parameter
    directions, fields held as background).
    """
    space = f.space
    count = space.m if kind == FIELD else space.p
    out = []
    for terms in _jet_table(f, kind, count):
        e = _strip_to_zero(terms, space.n)
        out.append(e if e is not None else space.zero())
    return out


def euler_lagrange(lam: Lagrangian) -> ELExpression:
    """``E_a = sum_alpha (-1)^|alpha| D_alpha (dL/dy^a_alpha)``."""
    require_order(lam.space, 2 * lam.order, "euler_lagrange")
    return ELExpression(euler_operator(lam.density, FIELD), 2 * lam.order)


def prolonged_action(v: Sequence[Expr], f: Expr) -> Expr:
    """``pr(v) f = sum_{a,alpha} D_alpha(v^a) df/dy^a_alpha`` for vertical ``v``."""
    space = f.space
    table = _jet_table(f, FIELD, space.m)
    total = space.zero()
    for a, terms in enumerate(table):
        if not terms or v[a].is_zero:
            continue
        s = max(alpha.order for alpha in terms)
        jets = jets_of(v[a], s)
        for alpha, P in terms.items():
            total = total + jets[alpha] * P
    return total


class FirstVariation(NamedTuple):
    interior: Expr
    boundary: HorizontalForm

    @property
    def current(self) -> List[Expr]:
        return self.boundary.current_components()


def first_variation(lam: Lagrangian, v: Sequence[Expr], check: bool = True) -> FirstVariation:
    """Split ``pr(v) L = sum_a v^a E_a + sum_mu D_mu eps^mu``.

    The boundary current comes from the deterministic index-stripping
    recursion of :func:`_strip_to_zero`.  With ``check`` the identity is
    re-verified symbolically.
    """
    space = lam.space
    if len(v) != space.m:
        raise JetvarError(f"expected {space.m} variation components, got {len(v)}")
    v = [space.const(x) if not isinstance(x, Expr) else x for x in v]
    s = lam.order
    vorder = max((e.jet_order() for e in v), default=0)
    require_order(space, max(2 * s, s + vorder), "first_variation")

    eps = [space.zero() for _ in range(space.n)]
    interior = space.zero()
    table = _jet_table(lam.density, FIELD, space.m)
    for a, terms in enumerate(table):
        if v[a].is_zero or not terms:
            continue
        jets = jets_of(v[a], max(alpha.order for alpha in terms))

        def collect(mu, beta, T, jets=jets):
            eps[mu] = eps[mu] + T * jets[beta]

        rest = _strip_to_zero(terms, space.n, collect)
        if rest is not None:
            interior = interior + rest * v[a]
    boundary = HorizontalForm.current(eps)
    if check:
        residual = prolonged_action(v, lam.density) - interior - divergence(eps)
        if not residual.is_zero:
            raise IdentityCheckError(f"first-variation identity failed: residual {residual}")
    return FirstVariation(interior, boundary)
