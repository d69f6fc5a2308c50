"""Linear total-differential operators, linearisation and formal adjoints."""

from __future__ import annotations

from typing import Dict, List, Mapping, NamedTuple, Sequence, Tuple

from ..errors import JetvarError
from ..jetspace.space import JetSpace, MultiIndex, sub_indices
from ..jetspace.vectorfield import jets_of
from ..symexpr.coords import FIELD
from ..symexpr.expr import Expr, partial
from ..variational.lagrangian import require_order

Key = Tuple[int, int, MultiIndex]


class LinearDiffOperator:
    """``(L v)_a = sum_{b, alpha} A^alpha_{ab} D_alpha v^b``.

    ``coeffs`` maps ``(a, b, alpha)`` to a canonical nonzero :class:`Expr`.
    """

    __slots__ = ("space", "rows", "cols", "coeffs")

    def __init__(self, space: JetSpace, rows: int, cols: int, coeffs: Mapping[Tuple[int, int, Sequence[int]], Expr]):
        clean: Dict[Key, Expr] = {}
        for (a, b, alpha), c in coeffs.items():
            if not (0 <= a < rows and 0 <= b < cols):
                raise JetvarError(f"coefficient index ({a}, {b}) outside {rows}x{cols}")
            if len(alpha) != space.n:
                raise JetvarError(f"multi-index {tuple(alpha)} has wrong length")
            if not isinstance(c, Expr):
                c = space.const(c)
            if not c.is_zero:
                clean[(a, b, MultiIndex(alpha))] = c
        self.space = space
        self.rows = rows
        self.cols = cols
        self.coeffs = clean

    @classmethod
    def zero(cls, space: JetSpace, rows: int, cols: int | None = None) -> "LinearDiffOperator":
        return cls(space, rows, rows if cols is None else cols, {})

    @classmethod
    def identity(cls, space: JetSpace, size: int, factor=1) -> "LinearDiffOperator":
        zero = MultiIndex.zero(space.n)
        return cls(space, size, size, {(a, a, zero): space.const(1) * factor for a in range(size)})

    @property
    def order(self) -> int:
        return max((alpha.order for (_, _, alpha) in self.coeffs), default=0)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, a: int, b: int, alpha: Sequence[int]) -> Expr:
        return self.coeffs.get((a, b, MultiIndex(alpha)), self.space.zero())

    def entry(self, a: int, b: int) -> Dict[MultiIndex, Expr]:
        return {alpha: c for (i, j, alpha), c in self.coeffs.items() if i == a and j == b}

    def coefficient_order(self) -> int:
        """Largest jet order appearing inside the coefficients."""
        return max((c.jet_order() for c in self.coeffs.values()), default=0)

    def apply(self, v: Sequence[Expr]) -> List[Expr]:
        if len(v) != self.cols:
            raise JetvarError(f"operator expects {self.cols} components, got {len(v)}")
        space = self.space
        jets = [jets_of(x, self.order) if isinstance(x, Expr) else jets_of(space.const(x), self.order)
                for x in v]
        out = [space.zero() for _ in range(self.rows)]
        for (a, b, alpha), c in self.coeffs.items():
            out[a] = out[a] + c * jets[b][alpha]
        return out

    # -- algebra --------------------------------------------------------------

    def _check(self, other: "LinearDiffOperator") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise JetvarError("operator shapes differ")
        if self.space is not other.space and self.space != other.space:
            raise JetvarError("operators live on different spaces")

    def __add__(self, other: "LinearDiffOperator") -> "LinearDiffOperator":
        self._check(other)
        coeffs = dict(self.coeffs)
        for k, c in other.coeffs.items():
            coeffs[k] = coeffs[k] + c if k in coeffs else c
        return LinearDiffOperator(self.space, self.rows, self.cols, coeffs)

    def __neg__(self) -> "LinearDiffOperator":
        return LinearDiffOperator(self.space, self.rows, self.cols, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: "LinearDiffOperator") -> "LinearDiffOperator":
        return self + (-other)

    def scale(self, f) -> "LinearDiffOperator":
        return LinearDiffOperator(self.space, self.rows, self.cols, {k: c * f for k, c in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearDiffOperator):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.coeffs.items())))

    # -- printing -------------------------------------------------------------

    def format_entry(self, a: int, b: int) -> str:
        return format_operator_terms(self.space, self.entry(a, b))

    def __str__(self) -> str:
        if self.rows == 1 and self.cols == 1:
            return self.format_entry(0, 0)
        lines = []
        for a in range(self.rows):
            lines.append("[" + ", ".join(self.format_entry(a, b) for b in range(self.cols)) + "]")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"LinearDiffOperator({self.rows}x{self.cols}, order={self.order})"

    def table(self) -> List[dict]:
        """Coefficient table in canonical key order, as plain data."""
        out = []
        for (a, b, alpha) in sorted(self.coeffs, key=lambda k: (k[0], k[1], k[2].sort_key())):
            out.append({"row": a, "col": b, "index": list(alpha),
                        "derivative": _d_symbol(self.space, alpha),
                        "coefficient": str(self.coeffs[(a, b, alpha)])})
        return out


def _d_symbol(space: JetSpace, alpha: Sequence[int]) -> str:
    parts = []
    for name, k in zip(space.base_names, alpha):
        if k:
            parts.append(f"D_{name}" if k == 1 else f"D_{name}^{k}")
    return "*".join(parts)


def format_operator_terms(space: JetSpace, terms: Mapping[MultiIndex, Expr]) -> str:
    """``-(D_t^2 + 1)`` style rendering, highest derivatives first."""
    if not terms:
        return "0"
    items = []
    for alpha in sorted(terms, key=lambda a: (-a.order, tuple(-x for x in a))):
        c = terms[alpha]
        items.append((alpha, c))
    negate_all = _is_negative(items[0][1]) and len(items) > 1
    pieces = []
    for alpha, c in items:
        if negate_all:
            c = -c
        d = _d_symbol(space, alpha)
        neg = _is_negative(c)
        body_c = -c if neg else c
        text = str(body_c)
        if d:
            if text == "1":
                body = d
            else:
                if len(body_c.num) > 1 or not body_c.is_polynomial:
                    text = f"({text})"
                body = f"{text}*{d}"
        else:
            body = text if (len(body_c.num) == 1 and body_c.is_polynomial) else f"({text})"
        pieces.append((neg, body))
    out = ("-" if pieces[0][0] else "") + pieces[0][1]
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return f"-({out})" if negate_all else out


def _is_negative(c: Expr) -> bool:
    return str(c).startswith("-")


def linearize(E: Sequence[Expr]) -> LinearDiffOperator:
    """Frechet derivative: ``A^alpha_{ab} = dE_a / dy^b_alpha``."""
    if not E:
        raise JetvarError("nothing to linearize")
    space = E[0].space
    coeffs = {}
    for a, Ea in enumerate(E):
        for c in Ea.variables():
            if c.kind == FIELD:
                coeffs[(a, c.owner, tuple(c.index))] = partial(Ea, c)
    return LinearDiffOperator(space, len(E), space.m, coeffs)


def formal_adjoint(L: LinearDiffOperator) -> LinearDiffOperator:
    """``(L^+ u)_b = sum_{a, alpha} (-1)^|alpha| D_alpha(A^alpha_{ab} u^a)``.

    Expanded by Leibniz: the coefficient of ``D_beta u^a`` is
    ``sum_{alpha >= beta} (-1)^|alpha| C(alpha, beta) D_{alpha-beta} A^alpha_{ab}``.
    """
    space = L.space
    require_order(space, L.coefficient_order() + L.order, "formal_adjoint")
    coeffs: Dict[Tuple[int, int, MultiIndex], Expr] = {}
    for (a, b, alpha), A in L.coeffs.items():
        jets = jets_of(A, alpha.order)
        sign = -1 if alpha.order % 2 else 1
        for beta in sub_indices(alpha):
            gamma = alpha - beta
            term = jets[gamma] * (sign * alpha.binomial(beta))
            key = (b, a, beta)
            coeffs[key] = coeffs[key] + term if key in coeffs else term
    return LinearDiffOperator(space, L.cols, L.rows, coeffs)


def compose(L1: LinearDiffOperator, L2: LinearDiffOperator) -> LinearDiffOperator:
    """``L1 o L2`` re-expanded into canonical coefficient form."""
    if L1.cols != L2.rows:
        raise JetvarError("cannot compose: inner dimensions differ")
    if L1.space is not L2.space and L1.space != L2.space:
        raise JetvarError("operators live on different spaces")
    space = L1.space
    require_order(space, L2.coefficient_order() + L1.order, "compose")
    coeffs: Dict[Tuple[int, int, MultiIndex], Expr] = {}
    jet_cache = {k: jets_of(B, L1.order) for k, B in L2.coeffs.items()}
    for (a, b, alpha), A in L1.coeffs.items():
        for (b2, c, beta), B in L2.coeffs.items():
            if b2 != b:
                continue
            jets = jet_cache[(b2, c, beta)]
            for gamma in sub_indices(alpha):
                term = A * jets[alpha - gamma] * alpha.binomial(gamma)
                key = (a, c, beta + gamma)
                coeffs[key] = coeffs[key] + term if key in coeffs else term
    return LinearDiffOperator(space, L1.rows, L2.cols, coeffs)


class SelfAdjointReport(NamedTuple):
    verdict: bool
    discrepancy: Dict[Key, Expr]

    def describe(self, space: JetSpace) -> List[dict]:
        return [{"row": a, "col": b, "index": list(alpha), "derivative": _d_symbol(space, alpha),
                 "difference": str(d)}
                for (a, b, alpha), d in sorted(self.discrepancy.items(),
                                               key=lambda kv: (kv[0][0], kv[0][1], kv[0][2].sort_key()))]


def self_adjoint_report(L: LinearDiffOperator) -> SelfAdjointReport:
    """Compare ``L`` with its formal adjoint; the discrepancy table is ``L - L^+``."""
    if L.rows != L.cols:
        raise JetvarError("self-adjointness needs a square operator")
    diff = L - formal_adjoint(L)
    return SelfAdjointReport(diff.is_zero, dict(diff.coeffs))
