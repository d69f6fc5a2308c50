"""Horizontal forms, the horizontal differential and contact coefficients."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Mapping, Sequence, Tuple

from ..errors import JetvarError
from ..symexpr.coords import Coordinate
from ..symexpr.expr import Expr, partial
from .derivatives import total_derivative
from .space import JetSpace


class DegreeOverflowWarning(UserWarning):
    """``d_H`` was applied to a form of top degree."""


@dataclass(frozen=True)
class HorizontalForm:
    """``sum_I c_I dx^I`` over strictly increasing index tuples ``I``."""

    space: JetSpace
    degree: int
    coeffs: Mapping[Tuple[int, ...], Expr] = field(default_factory=dict)
    truncated: bool = False

    def __post_init__(self):
        n = self.space.n
        if not 0 <= self.degree <= n:
            raise JetvarError(f"horizontal degree {self.degree} outside 0..{n}")
        clean: Dict[Tuple[int, ...], Expr] = {}
        for idx, c in self.coeffs.items():
            idx = tuple(idx)
            if len(idx) != self.degree or list(idx) != sorted(set(idx)) or any(not 0 <= i < n for i in idx):
                raise JetvarError(f"index tuple {idx} is not strictly increasing of length {self.degree}")
            if not c.is_zero:
                clean[idx] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def zero(cls, space: JetSpace, degree: int) -> "HorizontalForm":
        return cls(space, degree, {})

    @classmethod
    def density(cls, L: Expr) -> "HorizontalForm":
        """``L dx^1 ^ ... ^ dx^n``."""
        n = L.space.n
        return cls(L.space, n, {tuple(range(n)): L})

    @classmethod
    def current(cls, components: Sequence[Expr]) -> "HorizontalForm":
        """The ``(n-1)``-form ``eps^mu d/dx^mu _| vol``.

        Sign convention: the coefficient of ``dx^{all but mu}`` is
        ``(-1)^mu eps^mu``, so ``d_H`` of a current is exactly its divergence.
        """
        space = components[0].space
        n = space.n
        if len(components) != n:
            raise JetvarError(f"a current needs {n} components")
        coeffs = {}
        for mu, e in enumerate(components):
            idx = tuple(i for i in range(n) if i != mu)
            coeffs[idx] = e if mu % 2 == 0 else -e
        return cls(space, n - 1, coeffs)

    def coefficient(self, idx: Sequence[int]) -> Expr:
        return self.coeffs.get(tuple(idx), self.space.zero())

    def current_components(self) -> List[Expr]:
        """Inverse of :meth:`current` for degree ``n-1`` forms."""
        n = self.space.n
        if self.degree != n - 1:
            raise JetvarError("only degree n-1 forms are currents")
        out = []
        for mu in range(n):
            c = self.coefficient(tuple(i for i in range(n) if i != mu))
            out.append(c if mu % 2 == 0 else -c)
        return out

    def density_coefficient(self) -> Expr:
        if self.degree != self.space.n:
            raise JetvarError("only top-degree forms have a density coefficient")
        return self.coefficient(tuple(range(self.space.n)))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "HorizontalForm") -> "HorizontalForm":
        if other.degree != self.degree:
            raise JetvarError("cannot add forms of different degree")
        coeffs = dict(self.coeffs)
        for k, v in other.coeffs.items():
            coeffs[k] = coeffs[k] + v if k in coeffs else v
        return HorizontalForm(self.space, self.degree, coeffs)

    def __neg__(self) -> "HorizontalForm":
        return HorizontalForm(self.space, self.degree, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "HorizontalForm") -> "HorizontalForm":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HorizontalForm):
            return NotImplemented
        return self.degree == other.degree and dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self):
        return hash((self.degree, frozenset(self.coeffs.items())))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        names = self.space.base_names
        parts = []
        for idx in sorted(self.coeffs):
            basis = "^".join(f"d{names[i]}" for i in idx) or "1"
            parts.append(f"{basis}: {self.coeffs[idx]}")
        return "{" + ", ".join(parts) + "}"


def d_H(omega: HorizontalForm) -> HorizontalForm:
    """Horizontal differential ``sum_mu D_mu(c_I) dx^mu ^ dx^I``.

    For a top-degree form the result is the zero form of the same degree,
    flagged ``truncated`` and accompanied by a :class:`DegreeOverflowWarning`.
    """
    space = omega.space
    n = space.n
    if omega.degree == n:
        warnings.warn("d_H of a top-degree form vanishes", DegreeOverflowWarning, stacklevel=2)
        return HorizontalForm(space, n, {}, truncated=True)
    out: Dict[Tuple[int, ...], Expr] = {}
    for J in combinations(range(n), omega.degree + 1):
        total = space.zero()
        for pos, mu in enumerate(J):
            I = J[:pos] + J[pos + 1:]
            c = omega.coeffs.get(I)
            if c is None:
                continue
            d = total_derivative(c, mu)
            total = total + d if pos % 2 == 0 else total - d
        out[J] = total
    return HorizontalForm(space, omega.degree + 1, out)


def d_V(f: Expr) -> Dict[Coordinate, Expr]:
    """Contact coefficients: ``d_V f = sum (df/dy^a_alpha) theta^a_alpha``.

    Keys are the jet coordinates (fields and parameters) with a nonzero
    coefficient, in the global variable order.
    """
    out: Dict[Coordinate, Expr] = {}
    for c in f.variables():
        if c.is_jet:
            d = partial(f, c)
            if not d.is_zero:
                out[c] = d
    return out
