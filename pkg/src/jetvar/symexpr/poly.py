"""Sparse multivariate polynomials over the rationals.

A polynomial is a plain ``dict`` mapping a monomial to a nonzero coefficient
(``int`` or ``Fraction``).  A monomial is a sorted tuple of variable ranks with
repetition, so ``x*y**2`` with ranks 0 and 3 is ``(0, 3, 3)``.  The empty tuple
is the constant monomial.

Lower rank means an earlier (larger) variable.  For monomials of equal degree
the lexicographic order is then the *reverse* of tuple order, which is what
:func:`grlex_key` encodes.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Tuple, Union

Coef = Union[int, Fraction]
Mono = Tuple[int, ...]
Poly = Dict[Mono, Coef]

ONE: Mono = ()


def const(c: Coef) -> Poly:
    return {ONE: c} if c else {}


def var(rank: int) -> Poly:
    return {(rank,): 1}


def _tidy(c: Coef) -> Coef:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


@lru_cache(maxsize=1 << 18)
def mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b))


def grlex_key(m: Mono):
    """Sort key realising graded lexicographic order (ascending)."""
    return (len(m), tuple(-r for r in m))


def add(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def add_into(out: Poly, b: Poly, scale: Coef = 1) -> None:
    """In-place ``out += scale * b``."""
    for m, c in b.items():
        v = out.get(m, 0) + scale * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)


def neg(a: Poly) -> Poly:
    return {m: -c for m, c in a.items()}


def sub(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    add_into(out, b, -1)
    return out


def scale(a: Poly, c: Coef) -> Poly:
    if not c:
        return {}
    c = _tidy(c)
    return {m: _tidy(v * c) for m, v in a.items()}


def mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return {}
    if len(a) == 1 and ONE in a:
        return scale(b, a[ONE])
    if len(b) == 1 and ONE in b:
        return scale(a, b[ONE])
    out: Poly = {}
    get = out.get
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = mono_mul(m1, m2)
            out[m] = get(m, 0) + c1 * c2
    return {m: _tidy(c) for m, c in out.items() if c}


def power(a: Poly, k: int) -> Poly:
    if k < 0:
        raise ValueError("negative exponent on a polynomial")
    result = const(1)
    base = a
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def diff(a: Poly, rank: int) -> Poly:
    out: Poly = {}
    for m, c in a.items():
        k = m.count(rank)
        if k:
            i = m.index(rank)
            nm = m[:i] + m[i + 1:]
            v = out.get(nm, 0) + k * c
            if v:
                out[nm] = v
            else:
                out.pop(nm, None)
    return out


def degree(a: Poly) -> int:
    return max((len(m) for m in a), default=-1)


def low_degree(a: Poly) -> int:
    return min((len(m) for m in a), default=-1)


def variables(a: Poly) -> set:
    out = set()
    for m in a:
        out.update(m)
    return out


def leading(a: Poly) -> Tuple[Mono, Coef]:
    m = max(a, key=grlex_key)
    return m, a[m]


def is_const(a: Poly) -> bool:
    return not a or (len(a) == 1 and ONE in a)


def const_value(a: Poly) -> Coef:
    return a.get(ONE, 0)


def evaluate(a: Poly, values: Mapping[int, Coef]) -> Coef:
    total: Coef = 0
    for m, c in a.items():
        t = c
        for r in m:
            t = t * values[r]
        total += t
    return total


def substitute(a: Poly, images: Mapping[int, Poly]) -> Poly:
    """Simultaneous polynomial substitution ``rank -> polynomial``."""
    out: Poly = {}
    cache: Dict[Tuple[int, int], Poly] = {}
    for m, c in a.items():
        term = const(c)
        i = 0
        while i < len(m):
            r = m[i]
            j = i
            while j < len(m) and m[j] == r:
                j += 1
            k = j - i
            if r in images:
                key = (r, k)
                if key not in cache:
                    cache[key] = power(images[r], k)
                term = mul(term, cache[key])
            else:
                term = mul(term, {m[i:j]: 1})
            i = j
            if not term:
                break
        add_into(out, term)
    return out


def remap(a: Poly, ranks: Mapping[int, int]) -> Poly:
    """Rename variables by an injective rank map."""
    return {tuple(sorted(ranks[r] for r in m)): c for m, c in a.items()}


# --------------------------------------------------------------------------
# rational-function normalisation

def _content_free_cancel(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    """Cancel the polynomial GCD of ``num`` and ``den`` via sympy's sparse rings."""
    from sympy import QQ
    from sympy.polys.rings import ring

    ranks = sorted(variables(num) | variables(den))
    pos = {r: i for i, r in enumerate(ranks)}
    nvars = len(ranks)
    R, *_ = ring(",".join(f"v{i}" for i in range(nvars)), QQ)

    def to_ring(p: Poly):
        terms = {}
        for m, c in p.items():
            e = [0] * nvars
            for r in m:
                e[pos[r]] += 1
            terms[tuple(e)] = QQ(c.numerator, c.denominator) if isinstance(c, Fraction) else QQ(c)
        return R.from_dict(terms)

    def from_ring(p) -> Poly:
        out: Poly = {}
        for e, c in p.terms():
            m = []
            for i, k in enumerate(e):
                m.extend([ranks[i]] * k)
            out[tuple(m)] = _tidy(Fraction(int(c.numerator), int(c.denominator)))
        return out

    p, q = to_ring(num).cancel(to_ring(den))
    return from_ring(p), from_ring(q)


def normalize_fraction(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    """Return the canonical coprime pair with monic denominator.

    Raises ``ZeroDivisionError`` when the denominator is the zero polynomial.
    """
    if not den:
        raise ZeroDivisionError("denominator is identically zero")
    if not num:
        return {}, const(1)
    if not is_const(den):
        # a nonconstant common factor must involve a shared variable
        if variables(num) & variables(den):
            num, den = _content_free_cancel(num, den)
    _, lc = leading(den)
    if lc != 1:
        inv = Fraction(1) / lc
        num = scale(num, inv)
        den = scale(den, inv)
    return num, den


def from_iterable(terms: Iterable[Tuple[Mono, Coef]]) -> Poly:
    out: Poly = {}
    for m, c in terms:
        v = out.get(m, 0) + c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out
