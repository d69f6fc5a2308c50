"""Canonical rational expressions over jet-space coordinates."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import TYPE_CHECKING, Dict, Iterable, Mapping

from ..errors import SpaceMismatchError, UnboundVariableError, UndeclaredError
from . import poly as P
from .coords import CONST, Coordinate

if TYPE_CHECKING:
    from ..jetspace.space import JetSpace

_ONE = P.const(1)


class Expr:
    """An exact rational function ``num/den`` in the coordinates of a jet space.

    Instances are immutable and always canonical: numerator and denominator
    are coprime and the denominator is monic with respect to graded
    lexicographic order, so structural equality is mathematical equality.
    """

    __slots__ = ("space", "num", "den", "_hash")

    def __init__(self, space: "JetSpace", num: P.Poly, den: P.Poly | None = None):
        if den is None or den == _ONE:
            self.num, self.den = num, _ONE
        else:
            self.num, self.den = P.normalize_fraction(num, den)
        self.space = space
        self._hash = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def constant(cls, space: "JetSpace", value) -> "Expr":
        return cls(space, P.const(_as_rational(value)))

    @classmethod
    def coordinate(cls, space: "JetSpace", c: Coordinate) -> "Expr":
        return cls(space, P.var(c.rank))

    def _lift(self, other) -> "Expr":
        if isinstance(other, Expr):
            check_same_space(self, other)
            return other
        if isinstance(other, (int, Fraction, Rational)) and not isinstance(other, bool):
            return Expr(self.space, P.const(_as_rational(other)))
        return NotImplemented

    # -- predicates -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.num

    @property
    def is_polynomial(self) -> bool:
        return self.den == _ONE

    @property
    def is_constant(self) -> bool:
        return P.is_const(self.num) and self.den == _ONE

    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise ValueError(f"{self} is not a rational constant")
        return Fraction(P.const_value(self.num))

    def variables(self) -> list[Coordinate]:
        ranks = P.variables(self.num) | P.variables(self.den)
        return [self.space.coordinates[r] for r in sorted(ranks)]

    def degree(self) -> int:
        """Total degree of the numerator (``-1`` for zero)."""
        return P.degree(self.num)

    def jet_order(self) -> int:
        """Largest jet order among field and parameter coordinates present."""
        return max((c.order for c in self.variables() if c.is_jet), default=0)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other) -> "Expr":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.den == _ONE and other.den == _ONE:
            return Expr(self.space, P.add(self.num, other.num))
        if self.den == other.den:
            return Expr(self.space, P.add(self.num, other.num), self.den)
        num = P.add(P.mul(self.num, other.den), P.mul(other.num, self.den))
        return Expr(self.space, num, P.mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self) -> "Expr":
        e = Expr.__new__(Expr)
        e.space, e.num, e.den, e._hash = self.space, P.neg(self.num), self.den, None
        return e

    def __pos__(self) -> "Expr":
        return self

    def __sub__(self, other) -> "Expr":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Expr":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other) -> "Expr":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.den == _ONE and other.den == _ONE:
            return Expr(self.space, P.mul(self.num, other.num))
        return Expr(self.space, P.mul(self.num, other.num), P.mul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Expr":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if other.is_zero:
            raise ZeroDivisionError("division by the zero expression")
        return Expr(self.space, P.mul(self.num, other.den), P.mul(self.den, other.num))

    def __rtruediv__(self, other) -> "Expr":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k) -> "Expr":
        if not isinstance(k, int) or isinstance(k, bool):
            raise TypeError("only integer exponents are supported")
        if k < 0:
            if self.is_zero:
                raise ZeroDivisionError("zero raised to a negative power")
            return Expr(self.space, P.power(self.den, -k), P.power(self.num, -k))
        if self.den == _ONE:
            return Expr(self.space, P.power(self.num, k))
        # coprime stays coprime under powers
        e = Expr.__new__(Expr)
        e.space, e.num, e.den, e._hash = self.space, P.power(self.num, k), P.power(self.den, k), None
        return e

    # -- comparison -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __ne__(self, other) -> bool:
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((frozenset(self.num.items()), frozenset(self.den.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.num)

    # -- printing -------------------------------------------------------------

    def __str__(self) -> str:
        return format_expr(self)

    def __repr__(self) -> str:
        return f"Expr({format_expr(self)!r})"


def _as_rational(value) -> Fraction | int:
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return P._tidy(value)
    if isinstance(value, Rational):
        return P._tidy(Fraction(value.numerator, value.denominator))
    if isinstance(value, str):
        return P._tidy(Fraction(value))
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


def check_same_space(a: Expr, b: Expr) -> None:
    if a.space is not b.space and a.space != b.space:
        raise SpaceMismatchError("expressions belong to different jet spaces")


# ---------------------------------------------------------------------------
# module-level operations

def normalize(e: Expr) -> Expr:
    """Re-run canonicalisation from scratch (idempotent on canonical input)."""
    return Expr(e.space, dict(e.num), dict(e.den))


def equals(a: Expr, b: Expr) -> bool:
    check_same_space(a, b)
    return (a - b).is_zero


def _rank_of(space: "JetSpace", c) -> int:
    if isinstance(c, str):
        c = space.lookup(c)
    if not isinstance(c, Coordinate) or space.coordinates[c.rank] != c:
        raise UndeclaredError(f"coordinate {c} is not declared in this space")
    return c.rank


def partial(f: Expr, c: Coordinate | str) -> Expr:
    """Formal partial derivative treating every coordinate as independent."""
    r = _rank_of(f.space, c)
    dn = P.diff(f.num, r)
    if f.den == _ONE:
        return Expr(f.space, dn)
    dd = P.diff(f.den, r)
    if not dd:
        return Expr(f.space, dn, f.den)
    num = P.sub(P.mul(dn, f.den), P.mul(f.num, dd))
    return Expr(f.space, num, P.mul(f.den, f.den))


def substitute(f: Expr, bindings: Mapping) -> Expr:
    """Simultaneously replace coordinates by expressions, then renormalise.

    Raises ``ZeroDivisionError`` when the substituted denominator vanishes.
    """
    space = f.space
    images: Dict[int, Expr] = {}
    for c, value in bindings.items():
        r = _rank_of(space, c)
        if not isinstance(value, Expr):
            value = Expr.constant(space, value)
        check_same_space(f, value)
        images[r] = value
    if not images:
        return f
    if all(v.den == _ONE for v in images.values()):
        pimg = {r: v.num for r, v in images.items()}
        num = P.substitute(f.num, pimg)
        den = P.substitute(f.den, pimg) if f.den != _ONE else _ONE
        if not den:
            raise ZeroDivisionError("substitution makes the denominator vanish")
        return Expr(space, num, den)
    num = _subst_rational(space, f.num, images)
    den = _subst_rational(space, f.den, images)
    if den.is_zero:
        raise ZeroDivisionError("substitution makes the denominator vanish")
    return num / den


def _subst_rational(space, p: P.Poly, images: Mapping[int, Expr]) -> Expr:
    total = Expr(space, {})
    for m, c in p.items():
        term = Expr.constant(space, c)
        for r in m:
            term = term * (images[r] if r in images else Expr(space, P.var(r)))
        total = total + term
    return total


def eval_numeric(f: Expr, point: Mapping, constants: Mapping | None = None) -> Fraction:
    """Evaluate exactly at a rational point.

    ``point`` and ``constants`` map coordinates (or their names) to rationals.
    """
    space = f.space
    values: Dict[int, Fraction] = {}
    for mapping in (point, constants or {}):
        for c, v in mapping.items():
            values[_rank_of(space, c)] = Fraction(_as_rational(v))
    needed = P.variables(f.num) | P.variables(f.den)
    missing = [space.coordinates[r].name for r in sorted(needed) if r not in values]
    if missing:
        raise UnboundVariableError(f"unbound variables: {', '.join(missing)}")
    den = P.evaluate(f.den, values)
    if den == 0:
        raise ZeroDivisionError("denominator vanishes at the evaluation point")
    return Fraction(P.evaluate(f.num, values)) / den


def lambdify(f: Expr, coords: Iterable[Coordinate | str]):
    """Compile to a float function of the given coordinates (positional).

    Works elementwise on numpy arrays.  Variables of ``f`` missing from
    ``coords`` raise :class:`UnboundVariableError`.
    """
    space = f.space
    ranks = [_rank_of(space, c) for c in coords]
    names = {r: f"a{i}" for i, r in enumerate(ranks)}
    needed = P.variables(f.num) | P.variables(f.den)
    missing = [space.coordinates[r].name for r in sorted(needed) if r not in names]
    if missing:
        raise UnboundVariableError(f"unbound variables: {', '.join(missing)}")

    def src(p: P.Poly) -> str:
        if not p:
            return "0.0"
        parts = []
        for m, c in p.items():
            factors = [repr(float(c))]
            i = 0
            while i < len(m):
                j = i
                while j < len(m) and m[j] == m[i]:
                    j += 1
                k = j - i
                factors.append(names[m[i]] if k == 1 else f"{names[m[i]]}**{k}")
                i = j
            parts.append("*".join(factors))
        return "(" + " + ".join(parts) + ")"

    body = src(f.num) if f.den == _ONE else f"{src(f.num)}/{src(f.den)}"
    args = ", ".join(f"a{i}" for i in range(len(ranks)))
    fn = eval(f"lambda {args}: {body}", {"__builtins__": {}})
    fn.source = body
    return fn


# ---------------------------------------------------------------------------
# printing

def _format_rational(c: Fraction | int) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _format_monomial(space, m: P.Mono) -> str:
    # constants first for readability; otherwise global variable order
    counts: Dict[int, int] = {}
    for r in m:
        counts[r] = counts.get(r, 0) + 1
    order = sorted(counts, key=lambda r: (space.coordinates[r].kind != CONST, r))
    parts = []
    for r in order:
        name = space.coordinates[r].name
        parts.append(name if counts[r] == 1 else f"{name}^{counts[r]}")
    return "*".join(parts)


def _term_body(space, m: P.Mono, c) -> str:
    a = abs(Fraction(c))
    if not m:
        return _format_rational(a)
    mono = _format_monomial(space, m)
    if a == 1:
        return mono
    if a.denominator == 1:
        return f"{a.numerator}*{mono}"
    return f"({_format_rational(a)})*{mono}"


def format_poly(space, p: P.Poly) -> str:
    """Terms in ascending graded-lex order; a leading minus is factored out."""
    if not p:
        return "0"
    monos = sorted(p, key=P.grlex_key)
    signs = [p[m] < 0 for m in monos]
    bodies = [_term_body(space, m, p[m]) for m in monos]
    if signs[0] and len(monos) > 1:
        inner = _join(bodies, [not s for s in signs])
        return f"-({inner})"
    return _join(bodies, signs)


def _join(bodies, negative) -> str:
    out = ("-" if negative[0] else "") + bodies[0]
    for b, s in zip(bodies[1:], negative[1:]):
        out += (" - " if s else " + ") + b
    return out


def _format_denominator(space, p: P.Poly) -> str:
    # leading term first, so the monic denominator never opens with a minus
    monos = sorted(p, key=P.grlex_key, reverse=True)
    text = _join([_term_body(space, m, p[m]) for m in monos], [p[m] < 0 for m in monos])
    if len(monos) == 1 and "*" not in text:
        return text
    return f"({text})"


def format_expr(e: Expr) -> str:
    num = format_poly(e.space, e.num)
    if e.den == _ONE:
        return num
    if len(e.num) > 1 or "/" in num:
        num = f"({num})"
    return f"{num}/{_format_denominator(e.space, e.den)}"
