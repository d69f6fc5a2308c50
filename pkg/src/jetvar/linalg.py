"""Exact linear algebra over the rationals.

Dense routines work on lists of rows of ``Fraction``; :func:`solve_sparse`
handles the large, very sparse systems produced by ansatz methods.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

Matrix = List[List[Fraction]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


def transpose(a: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> List[Fraction]:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def rref(a: Sequence[Sequence]) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns."""
    m = to_matrix(a)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: Sequence[Sequence]) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def nullspace(a: Sequence[Sequence], ncols: Optional[int] = None) -> Matrix:
    """Basis of ``{x : a x = 0}`` as a list of vectors (free variable set to 1)."""
    if not a:
        n = ncols or 0
        return identity(n)
    m, pivots = rref(a)
    n = len(m[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -m[i][f]
        basis.append(v)
    return basis


def column_space(a: Sequence[Sequence]) -> Matrix:
    """Basis of the column space: the pivot columns of ``a`` itself."""
    if not a or not a[0]:
        return []
    _, pivots = rref(a)
    return [[Fraction(row[c]) for row in a] for c in pivots]


def inverse(a: Sequence[Sequence]) -> Optional[Matrix]:
    n = len(a)
    aug = [list(map(Fraction, row)) + e for row, e in zip(a, identity(n))]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in m]


def solve(a: Sequence[Sequence], b: Sequence) -> Optional[List[Fraction]]:
    """One solution of ``a x = b`` (free variables zero), or ``None``."""
    n = len(a[0]) if a else 0
    aug = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(a, b)]
    m, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(pivots):
        x[p] = m[i][n]
    return x


def in_span(basis: Sequence[Sequence], v: Sequence) -> Optional[List[Fraction]]:
    """Coefficients expressing ``v`` in ``basis`` (vectors), or ``None``."""
    if not basis:
        return [] if all(x == 0 for x in v) else None
    return solve(transpose(basis), v)


def solve_sparse(
    rows: Sequence[Dict[int, Fraction]], rhs: Sequence[Fraction]
) -> Optional[Dict[int, Fraction]]:
    """Solve a sparse system; rows map unknown index -> coefficient.

    Returns one solution (free unknowns zero) or ``None`` if inconsistent.
    """
    pivot_rows: Dict[int, Tuple[Dict[int, Fraction], Fraction]] = {}
    order: List[int] = []
    for row, b in zip(rows, rhs):
        row = {k: Fraction(v) for k, v in row.items() if v}
        b = Fraction(b)
        # reduce against existing pivots until stable
        while True:
            hit = next((k for k in row if k in pivot_rows), None)
            if hit is None:
                break
            prow, pb = pivot_rows[hit]
            f = row[hit]
            for k, v in prow.items():
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            b -= f * pb
        if not row:
            if b != 0:
                return None
            continue
        p = min(row)
        inv = 1 / row[p]
        row = {k: v * inv for k, v in row.items()}
        b *= inv
        pivot_rows[p] = (row, b)
        order.append(p)
    # back substitution in reverse pivot order
    x: Dict[int, Fraction] = {}
    for p in reversed(order):
        row, b = pivot_rows[p]
        val = b - sum((v * x.get(k, 0) for k, v in row.items() if k != p), Fraction(0))
        if val:
            x[p] = val
    return x
