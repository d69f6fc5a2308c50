"""Total derivatives on jet coordinates."""

from __future__ import annotations

from typing import Sequence

from ..symexpr import poly as P
from ..symexpr.coords import BASE
from ..symexpr.expr import Expr
from .space import JetSpace, MultiIndex


def _total_poly(space: JetSpace, p: P.Poly, mu: int) -> P.Poly:
    out: P.Poly = {}
    coords = space.coordinates
    shift = space._shift
    for m, c in p.items():
        prev = None
        for i, r in enumerate(m):
            if r == prev:
                continue
            prev = r
            row = shift[r]
            if row is None:
                coord = coords[r]
                if coord.kind != BASE or coord.owner != mu:
                    continue
                k = m.count(r)
                nm = m[:i] + m[i + 1:]
            else:
                nxt = row[mu]
                if nxt < 0:
                    # raises a descriptive OrderOverflowError
                    space.shift(coords[r], mu)
                k = m.count(r)
                rest = m[:i] + m[i + 1:]
                nm = P.mono_mul(rest, (nxt,))
            v = out.get(nm, 0) + k * c
            if v:
                out[nm] = v
            else:
                out.pop(nm, None)
    return out


def total_derivative(f: Expr, mu: int) -> Expr:
    """``D_mu f``: the formal derivative along base direction ``mu``.

    Raises :class:`~jetvar.errors.OrderOverflowError` when ``f`` contains a
    jet coordinate already at the maximum order in a term that survives.
    """
    space = f.space
    if not 0 <= mu < space.n:
        raise ValueError(f"base direction {mu} out of range for n={space.n}")
    dn = _total_poly(space, f.num, mu)
    if f.is_polynomial:
        return Expr(space, dn)
    dd = _total_poly(space, f.den, mu)
    if not dd:
        return Expr(space, dn, f.den)
    num = P.sub(P.mul(dn, f.den), P.mul(f.num, dd))
    return Expr(space, num, P.mul(f.den, f.den))


def total_derivative_multi(f: Expr, alpha: Sequence[int]) -> Expr:
    """``D_alpha f`` as a composition of single total derivatives."""
    if len(alpha) != f.space.n:
        raise ValueError(f"multi-index {tuple(alpha)} has wrong length for n={f.space.n}")
    for mu in MultiIndex(alpha).directions():
        f = total_derivative(f, mu)
    return f


def divergence(components: Sequence[Expr]) -> Expr:
    """``sum_mu D_mu eps^mu``."""
    if not components:
        raise ValueError("empty current")
    total = components[0].space.zero()
    for mu, e in enumerate(components):
        total = total + total_derivative(e, mu)
    return total
