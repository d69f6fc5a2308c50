"""Jet-space declarations: multi-indices, coordinates and their global order."""

from __future__ import annotations

import os
import re
from fractions import Fraction
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ..errors import JetvarError, OrderOverflowError, SpaceMismatchError, UndeclaredError
from ..symexpr import poly as P
from ..symexpr.coords import BASE, CONST, FIELD, PARAM, Coordinate
from ..symexpr.expr import Expr
from ..symexpr.parser import parse as _parse

DEFAULT_ORDER_CAP = 12
_NAME = re.compile(r"[A-Za-z][A-Za-z0-9]*\Z")


def order_cap() -> int:
    """Global cap on the jet order a space may track (``JETVAR_ORDER_CAP``)."""
    raw = os.environ.get("JETVAR_ORDER_CAP")
    if raw is None or raw.strip() == "":
        return DEFAULT_ORDER_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise JetvarError(f"JETVAR_ORDER_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise JetvarError("JETVAR_ORDER_CAP must be at least 1")
    return cap


class MultiIndex(tuple):
    """Exponent vector over the base directions; ``order`` is ``|alpha|``."""

    def __new__(cls, exponents=()):
        exps = tuple(int(e) for e in exponents)
        if any(e < 0 for e in exps):
            raise ValueError("multi-index exponents must be non-negative")
        return super().__new__(cls, exps)

    @classmethod
    def zero(cls, n: int) -> "MultiIndex":
        return cls((0,) * n)

    @classmethod
    def unit(cls, n: int, mu: int) -> "MultiIndex":
        e = [0] * n
        e[mu] = 1
        return cls(e)

    @classmethod
    def from_directions(cls, n: int, directions: Sequence[int]) -> "MultiIndex":
        e = [0] * n
        for mu in directions:
            e[mu] += 1
        return cls(e)

    @property
    def order(self) -> int:
        return sum(self)

    def add(self, mu: int) -> "MultiIndex":
        e = list(self)
        e[mu] += 1
        return MultiIndex(e)

    def __add__(self, other):  # componentwise, not tuple concatenation
        return MultiIndex(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        return MultiIndex(a - b for a, b in zip(self, other))

    def directions(self) -> List[int]:
        """Base directions with repetition, in increasing order."""
        out: List[int] = []
        for mu, k in enumerate(self):
            out.extend([mu] * k)
        return out

    def smallest_direction(self) -> int:
        for mu, k in enumerate(self):
            if k:
                return mu
        raise ValueError("the empty multi-index has no direction")

    def binomial(self, beta: Sequence[int]) -> int:
        from math import comb

        out = 1
        for a, b in zip(self, beta):
            out *= comb(a, b)
        return out

    def sort_key(self):
        return (self.order, tuple(self))


def multi_indices(n: int, max_order: int, min_order: int = 0) -> Iterator[MultiIndex]:
    """All multi-indices of length ``n`` in canonical ``(|alpha|, lex)`` order."""
    for k in range(min_order, max_order + 1):
        for alpha in sorted(_compositions(n, k)):
            yield MultiIndex(alpha)


def _compositions(n: int, k: int):
    if n == 1:
        yield (k,)
        return
    for first in range(k + 1):
        for rest in _compositions(n - 1, k - first):
            yield (first,) + rest


def sub_indices(alpha: Sequence[int]) -> Iterator[MultiIndex]:
    """Every ``beta <= alpha`` componentwise."""
    for beta in product(*(range(a + 1) for a in alpha)):
        yield MultiIndex(beta)


class JetSpace:
    """Declaration of a finite-order jet space.

    Parameters
    ----------
    base : names of the ``n`` base coordinates; each must be a single letter
        so that subscript notation ``y_xxt`` is unambiguous.
    fields : names of the ``m`` fields.
    params : names of gauge parameters (their jets are coordinates too).
    order : maximum jet order ``s_max`` tracked for fields and parameters.
    constants : names of symbolic constants (independent indeterminates).
    metric : optional constant symmetric invertible ``n x n`` rational matrix.
    """

    def __init__(
        self,
        base: Sequence[str],
        fields: Sequence[str],
        params: Sequence[str] = (),
        order: int = 4,
        constants: Sequence[str] = (),
        metric: Optional[Sequence[Sequence]] = None,
    ):
        base, fields, params, constants = (tuple(x) for x in (base, fields, params, constants))
        if not base:
            raise JetvarError("a jet space needs at least one base coordinate")
        if not fields:
            raise JetvarError("a jet space needs at least one field")
        if not isinstance(order, int) or order < 1:
            raise JetvarError("maximum jet order must be a positive integer")
        cap = order_cap()
        if order > cap:
            raise OrderOverflowError(f"declared order {order} exceeds the order cap {cap}")
        for b in base:
            if not (len(b) == 1 and b.isalpha()):
                raise JetvarError(f"base coordinate names must be single letters, got {b!r}")
        for nm in fields + params + constants:
            if not _NAME.match(nm):
                raise JetvarError(f"invalid name {nm!r}: use letters and digits, starting with a letter")
        every = base + fields + params + constants
        dup = {x for x in every if every.count(x) > 1}
        if dup:
            raise JetvarError(f"duplicate names: {', '.join(sorted(dup))}")

        self.base_names = base
        self.field_names = fields
        self.param_names = params
        self.constant_names = constants
        self.s_max = order
        self.metric = _check_metric(metric, len(base)) if metric is not None else None
        self.inverse_metric = _invert(self.metric) if self.metric is not None else None

        self.coordinates: List[Coordinate] = []
        self._by_name: Dict[str, Coordinate] = {}
        self._jet_rank: Dict[Tuple[str, int, Tuple[int, ...]], int] = {}
        self._alphas = list(multi_indices(self.n, order))

        for mu, b in enumerate(base):
            self._add(Coordinate(BASE, mu, (), b, len(self.coordinates)))
        for kind, names in ((FIELD, fields), (PARAM, params)):
            for a, nm in enumerate(names):
                for alpha in self._alphas:
                    c = Coordinate(kind, a, tuple(alpha), self._jet_name(nm, alpha), len(self.coordinates))
                    self._add(c)
                    self._jet_rank[(kind, a, tuple(alpha))] = c.rank
        for k, nm in enumerate(constants):
            self._add(Coordinate(CONST, k, (), nm, len(self.coordinates)))

        # shift[rank][mu] = rank of the coordinate one order higher in direction mu
        self._shift: List[Optional[Tuple[int, ...]]] = []
        for c in self.coordinates:
            if c.is_jet:
                row = []
                for mu in range(self.n):
                    nxt = list(c.index)
                    nxt[mu] += 1
                    row.append(self._jet_rank.get((c.kind, c.owner, tuple(nxt)), -1))
                self._shift.append(tuple(row))
            else:
                self._shift.append(None)

    def _add(self, c: Coordinate) -> None:
        self.coordinates.append(c)
        self._by_name[c.name] = c

    def _jet_name(self, owner: str, alpha: Sequence[int]) -> str:
        sub = "".join(b * k for b, k in zip(self.base_names, alpha))
        return f"{owner}_{sub}" if sub else owner

    # -- sizes ----------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.base_names)

    @property
    def m(self) -> int:
        return len(self.field_names)

    @property
    def p(self) -> int:
        return len(self.param_names)

    # -- identity -------------------------------------------------------------

    def _key(self):
        return (self.base_names, self.field_names, self.param_names, self.s_max,
                self.constant_names, self.metric)

    def __eq__(self, other) -> bool:
        return isinstance(other, JetSpace) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        parts = [f"base={list(self.base_names)}", f"fields={list(self.field_names)}"]
        if self.param_names:
            parts.append(f"params={list(self.param_names)}")
        parts.append(f"order={self.s_max}")
        if self.constant_names:
            parts.append(f"constants={list(self.constant_names)}")
        return f"JetSpace({', '.join(parts)})"

    # -- coordinate access ----------------------------------------------------

    def lookup(self, name: str) -> Coordinate:
        """Resolve a coordinate name; subscript letters may come in any order."""
        c = self._by_name.get(name)
        if c is not None:
            return c
        if "_" in name:
            owner, _, sub = name.partition("_")
            if owner in self.field_names:
                kind, idx = FIELD, self.field_names.index(owner)
            elif owner in self.param_names:
                kind, idx = PARAM, self.param_names.index(owner)
            else:
                raise UndeclaredError(f"unknown field or parameter {owner!r} in {name!r}")
            alpha = [0] * self.n
            for ch in sub:
                if ch not in self.base_names:
                    raise UndeclaredError(f"unknown base coordinate {ch!r} in {name!r}")
                alpha[self.base_names.index(ch)] += 1
            if sum(alpha) > self.s_max:
                raise OrderOverflowError(
                    f"jet order {sum(alpha)} of {name!r} exceeds the declared maximum {self.s_max}")
            return self.coordinates[self._jet_rank[(kind, idx, tuple(alpha))]]
        raise UndeclaredError(f"unknown identifier {name!r}")

    def base(self, mu: int) -> Coordinate:
        return self.coordinates[mu]

    def jet(self, kind: str, owner: int, alpha: Sequence[int] | None = None) -> Coordinate:
        alpha = tuple(alpha) if alpha is not None else (0,) * self.n
        if len(alpha) != self.n:
            raise ValueError(f"multi-index {alpha} has wrong length for n={self.n}")
        if sum(alpha) > self.s_max:
            raise OrderOverflowError(
                f"jet order {sum(alpha)} exceeds the declared maximum {self.s_max}")
        try:
            return self.coordinates[self._jet_rank[(kind, owner, alpha)]]
        except KeyError:
            raise UndeclaredError(f"no {kind} coordinate owner={owner} index={alpha}") from None

    def field(self, a: int, alpha: Sequence[int] | None = None) -> Coordinate:
        return self.jet(FIELD, a, alpha)

    def param(self, A: int, alpha: Sequence[int] | None = None) -> Coordinate:
        return self.jet(PARAM, A, alpha)

    def constant(self, name: str) -> Coordinate:
        return self._by_name[name] if name in self.constant_names else self.lookup(name)

    def shift(self, c: Coordinate, mu: int) -> Coordinate:
        """The jet coordinate one order higher in direction ``mu``."""
        row = self._shift[c.rank]
        if row is None:
            raise ValueError(f"{c.name} is not a jet coordinate")
        r = row[mu]
        if r < 0:
            raise OrderOverflowError(
                f"D_{self.base_names[mu]} of {c.name} exceeds the declared maximum order {self.s_max}")
        return self.coordinates[r]

    def multi_indices(self, max_order: Optional[int] = None, min_order: int = 0) -> Iterator[MultiIndex]:
        return multi_indices(self.n, self.s_max if max_order is None else max_order, min_order)

    # -- expression helpers ---------------------------------------------------

    def var(self, c: Coordinate | str) -> Expr:
        if isinstance(c, str):
            c = self.lookup(c)
        return Expr.coordinate(self, c)

    def vars(self, names: str) -> List[Expr]:
        return [self.var(nm) for nm in names.split()]

    def const(self, value) -> Expr:
        return Expr.constant(self, value)

    def zero(self) -> Expr:
        return Expr(self, {})

    def parse(self, text: str) -> Expr:
        return _parse(text, self)

    # -- derived spaces -------------------------------------------------------

    def extended(self, params: Sequence[str] = (), order: Optional[int] = None) -> "JetSpace":
        """A copy with extra parameters and/or a different maximum order."""
        return JetSpace(self.base_names, self.field_names, self.param_names + tuple(params),
                        self.s_max if order is None else order, self.constant_names, self.metric)

    def transport(self, e: Expr) -> Expr:
        """Re-express ``e`` (from another space) in this space, matching names."""
        if e.space is self:
            return e
        ranks = {}
        for r in P.variables(e.num) | P.variables(e.den):
            name = e.space.coordinates[r].name
            try:
                ranks[r] = self._by_name[name].rank
            except KeyError:
                raise SpaceMismatchError(f"{name!r} has no counterpart in the target space") from None
        return Expr(self, P.remap(e.num, ranks), P.remap(e.den, ranks) if e.den != {(): 1} else None)


def _check_metric(metric, n: int) -> Tuple[Tuple[Fraction, ...], ...]:
    rows = tuple(tuple(Fraction(v) for v in row) for row in metric)
    if len(rows) != n or any(len(r) != n for r in rows):
        raise JetvarError(f"metric must be {n}x{n}")
    for i in range(n):
        for j in range(n):
            if rows[i][j] != rows[j][i]:
                raise JetvarError("metric must be symmetric")
    if _invert(rows) is None:
        raise JetvarError("metric must be invertible")
    return rows


def _invert(rows):
    from ..linalg import inverse

    return inverse(rows)
