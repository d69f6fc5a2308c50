"""Certificate-based on-shell vanishing via a bounded linear ansatz."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from ..errors import AnsatzTooLargeError, JetvarError
from ..jetspace.space import MultiIndex
from ..jetspace.vectorfield import jets_of
from ..linalg import solve_sparse
from ..symexpr import poly as P
from ..symexpr.expr import Expr
from .lagrangian import require_order

DEFAULT_MAX_UNKNOWNS = 20000


@dataclass(frozen=True)
class OnShellResult:
    holds: bool
    certificate: Dict[Tuple[int, MultiIndex], Expr] = field(default_factory=dict)
    degree: int = 0
    unknowns: int = 0

    def __bool__(self) -> bool:
        return self.holds


def is_on_shell_zero(
    f: Expr,
    E: Sequence[Expr],
    k: int,
    degree: Optional[int] = None,
    max_unknowns: int = DEFAULT_MAX_UNKNOWNS,
) -> OnShellResult:
    """Decide ``f = sum_{a, |alpha|<=k} C^{a alpha} D_alpha E_a`` for polynomial ``C``.

    The coefficients ``C`` range over polynomials of total degree at most
    ``degree`` in the variables of ``f`` and of the prolonged equations;
    by default ``degree = deg f - (lowest degree among the D_alpha E_a)``.
    A positive answer carries the certificate ``C``, re-verified exactly.
    """
    space = f.space
    if not f.is_polynomial or not all(e.is_polynomial for e in E):
        raise JetvarError("on-shell reduction needs polynomial expressions")
    if k < 0:
        raise ValueError("prolongation bound k must be non-negative")
    eorder = max((e.jet_order() for e in E), default=0)
    require_order(space, eorder + k, "is_on_shell_zero")

    gens: List[Tuple[Tuple[int, MultiIndex], Expr]] = []
    for a, Ea in enumerate(E):
        if Ea.is_zero:
            continue
        for alpha, g in jets_of(Ea, k).items():
            if not g.is_zero:
                gens.append(((a, alpha), g))
    if f.is_zero:
        return OnShellResult(True, {}, 0, 0)
    if not gens:
        return OnShellResult(False, {}, 0, 0)

    if degree is None:
        degree = max(0, f.degree() - min(P.low_degree(g.num) for _, g in gens))
    variables = set(P.variables(f.num))
    for _, g in gens:
        variables |= P.variables(g.num)
    variables = sorted(variables)
    n_monos = comb(len(variables) + degree, degree)
    unknowns = n_monos * len(gens)
    if unknowns > max_unknowns:
        raise AnsatzTooLargeError(
            f"ansatz needs {unknowns} unknowns (cap {max_unknowns}); lower k or degree")

    monos = [m for d in range(degree + 1) for m in combinations_with_replacement(variables, d)]
    columns: List[Tuple[int, P.Mono]] = []
    rows: Dict[P.Mono, Dict[int, Fraction]] = {}
    for gi, (_, g) in enumerate(gens):
        for mono in monos:
            j = len(columns)
            columns.append((gi, mono))
            for gm, c in g.num.items():
                rows.setdefault(P.mono_mul(mono, gm), {})[j] = c
    for m in f.num:
        rows.setdefault(m, {})
    keys = list(rows)
    sol = solve_sparse([rows[m] for m in keys], [f.num.get(m, 0) for m in keys])
    if sol is None:
        return OnShellResult(False, {}, degree, unknowns)

    cert_polys: Dict[int, P.Poly] = {}
    for j, x in sol.items():
        gi, mono = columns[j]
        P.add_into(cert_polys.setdefault(gi, {}), {mono: x})
    certificate = {}
    check = space.zero()
    for gi, poly in cert_polys.items():
        C = Expr(space, poly)
        if C.is_zero:
            continue
        key, g = gens[gi]
        certificate[key] = C
        check = check + C * g
    if check != f:
        raise JetvarError("internal error: on-shell certificate failed verification")
    return OnShellResult(True, certificate, degree, unknowns)
