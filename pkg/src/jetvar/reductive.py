"""Exact finite-dimensional certificates for kernel/image reductive splits.

Structure constants are stored as ``c[k][i][j]``, the coefficient of
``e_k`` in ``[e_i, e_j]``.  All arithmetic is over :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import linalg as la
from .errors import JetvarError, NotSymmetricError, SpanningError, StructureConstantsError

Vector = List[Fraction]
Matrix = List[List[Fraction]]


def _vec(v: Sequence, d: int) -> Vector:
    if len(v) != d:
        raise JetvarError(f"expected a vector of dimension {d}, got {len(v)}")
    return [Fraction(x) for x in v]


def _is_zero(v: Iterable) -> bool:
    return all(x == 0 for x in v)


class LieAlgebra:
    """A finite-dimensional Lie algebra with a chosen inner product ``g``."""

    def __init__(self, constants: Sequence[Sequence[Sequence]], inner: Optional[Sequence[Sequence]] = None,
                 name: str = ""):
        d = len(constants)
        c = [[[Fraction(constants[k][i][j]) for j in range(d)] for i in range(d)] for k in range(d)]
        if any(len(constants[k]) != d or any(len(r) != d for r in constants[k]) for k in range(d)):
            raise StructureConstantsError("structure constants must form a d x d x d array")
        self.dim = d
        self.c = c
        self.name = name
        self._check_antisymmetry()
        self._check_jacobi()
        g = la.identity(d) if inner is None else la.to_matrix(inner)
        if len(g) != d or any(len(r) != d for r in g):
            raise JetvarError(f"inner product must be {d} x {d}")
        if la.transpose(g) != g:
            raise JetvarError("inner product must be symmetric")
        if la.rank(g) != d:
            raise JetvarError("inner product is degenerate")
        self.inner = g

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_triples(cls, dim: int, triples: Iterable[Tuple[int, int, int, object]],
                     inner=None, name: str = "", one_based: bool = False) -> "LieAlgebra":
        """``(i, j, k, value)`` means ``[e_i, e_j]`` has ``value`` on ``e_k``.

        The antisymmetric partner is filled in; contradictory or diagonal
        entries raise :class:`StructureConstantsError`.
        """
        shift = 1 if one_based else 0
        c = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        seen: Dict[Tuple[int, int, int], Fraction] = {}
        for i, j, k, value in triples:
            i, j, k = i - shift, j - shift, k - shift
            if not all(0 <= x < dim for x in (i, j, k)):
                raise StructureConstantsError(f"index out of range in triple {(i + shift, j + shift, k + shift)}")
            value = Fraction(value)
            if i == j:
                if value != 0:
                    raise StructureConstantsError(f"[e_{i + shift}, e_{i + shift}] must vanish")
                continue
            for key, val in (((i, j, k), value), ((j, i, k), -value)):
                if key in seen and seen[key] != val:
                    raise StructureConstantsError(
                        f"conflicting values for [e_{key[0] + shift}, e_{key[1] + shift}] on e_{key[2] + shift}")
                seen[key] = val
            c[k][i][j] = value
            c[k][j][i] = -value
        return cls(c, inner, name)

    @classmethod
    def abelian(cls, dim: int, inner=None) -> "LieAlgebra":
        return cls([[[0] * dim for _ in range(dim)] for _ in range(dim)], inner, f"R^{dim}")

    @classmethod
    def euclidean2(cls) -> "LieAlgebra":
        """``e(2)`` on ``(r, p1, p2)``: ``[r, p1] = p2``, ``[r, p2] = -p1``."""
        return cls.from_triples(3, [(0, 1, 2, 1), (0, 2, 1, -1)], name="e(2)")

    @classmethod
    def sl2(cls) -> "LieAlgebra":
        """``sl(2)`` on ``(e, f, h)``: ``[e, f] = h``, ``[h, e] = 2e``, ``[h, f] = -2f``."""
        return cls.from_triples(3, [(0, 1, 2, 1), (2, 0, 0, 2), (2, 1, 1, -2)], name="sl(2)")

    @classmethod
    def so3(cls) -> "LieAlgebra":
        return cls.from_triples(3, [(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1)], name="so(3)")

    @classmethod
    def so3_r3(cls) -> "LieAlgebra":
        """Euclidean algebra ``so(3) + R^3``: rotations ``L_i`` then translations ``P_i``."""
        triples = []
        for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            triples.append((i, j, k, 1))
            triples.append((i, 3 + j, 3 + k, 1))
            triples.append((j, 3 + i, 3 + k, -1))
        return cls.from_triples(6, triples, name="e(3)")

    @classmethod
    def heisenberg(cls) -> "LieAlgebra":
        return cls.from_triples(3, [(0, 1, 2, 1)], name="heisenberg")

    @classmethod
    def semidirect(cls, action: Sequence[Sequence], inner=None, name: str = "") -> "LieAlgebra":
        """``R e_0`` acting on ``R^k`` by ``action``: ``[e_0, v_i] = sum_j action[j][i] v_j``."""
        M = la.to_matrix(action)
        k = len(M)
        triples = [(0, 1 + i, 1 + j, M[j][i]) for i in range(k) for j in range(k) if M[j][i] != 0]
        return cls.from_triples(k + 1, triples, inner, name or f"R+R^{k}")

    # -- structure ------------------------------------------------------------

    def _check_antisymmetry(self) -> None:
        d, c = self.dim, self.c
        for k in range(d):
            for i in range(d):
                for j in range(i, d):
                    if c[k][i][j] != -c[k][j][i]:
                        raise StructureConstantsError(
                            f"antisymmetry fails: c^{k}_({i},{j}) = {c[k][i][j]}, c^{k}_({j},{i}) = {c[k][j][i]}")

    def _check_jacobi(self) -> None:
        d = self.dim
        basis = la.identity(d)
        for i, j, k in combinations(range(d), 3):
            a, b, e = basis[i], basis[j], basis[k]
            s = [x + y + z for x, y, z in zip(self.bracket(a, self.bracket(b, e)),
                                              self.bracket(b, self.bracket(e, a)),
                                              self.bracket(e, self.bracket(a, b)))]
            if not _is_zero(s):
                raise StructureConstantsError(f"Jacobi identity fails on (e_{i}, e_{j}, e_{k})")

    def bracket(self, u: Sequence, v: Sequence) -> Vector:
        d = self.dim
        u, v = _vec(u, d), _vec(v, d)
        out = []
        for k in range(d):
            ck = self.c[k]
            s = Fraction(0)
            for i in range(d):
                if u[i]:
                    row = ck[i]
                    s += u[i] * sum((row[j] * v[j] for j in range(d) if v[j]), Fraction(0))
            out.append(s)
        return out

    def ad(self, u: Sequence) -> Matrix:
        """Matrix of ``ad_u`` (columns are images of basis vectors)."""
        cols = [self.bracket(u, e) for e in la.identity(self.dim)]
        return la.transpose(cols)

    def killing_form(self) -> Matrix:
        d = self.dim
        ads = [self.ad(e) for e in la.identity(d)]
        return [[sum((ads[i][r][s] * ads[j][s][r] for r in range(d) for s in range(d)), Fraction(0))
                 for j in range(d)] for i in range(d)]

    def with_inner(self, inner) -> "LieAlgebra":
        return LieAlgebra(self.c, inner, self.name)

    def with_killing_form(self) -> "LieAlgebra":
        """Same algebra paired by its Killing form; degenerate forms are rejected."""
        K = self.killing_form()
        if la.rank(K) != self.dim:
            raise JetvarError(f"Killing form of {self.name or 'the algebra'} is degenerate")
        return self.with_inner(K)

    def conjugate(self, P: Sequence[Sequence]) -> "LieAlgebra":
        """Rewrite in the basis ``e'_i = sum_j P[j][i] e_j``; ``g' = P^T g P``."""
        P = la.to_matrix(P)
        Pinv = la.inverse(P)
        if Pinv is None:
            raise JetvarError("change of basis must be invertible")
        d = self.dim
        cols = la.transpose(P)
        c = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
        for i in range(d):
            for j in range(d):
                w = la.matvec(Pinv, self.bracket(cols[i], cols[j]))
                for k in range(d):
                    c[k][i][j] = w[k]
        g = la.matmul(la.matmul(la.transpose(P), self.inner), P)
        return LieAlgebra(c, g, self.name)

    def __repr__(self) -> str:
        return f"LieAlgebra({self.name or 'dim'}={self.dim})"


@dataclass(frozen=True)
class AlgebraOperator:
    """A ``d x d`` rational matrix acting on coordinate vectors."""

    matrix: Tuple[Tuple[Fraction, ...], ...]

    def __init__(self, matrix: Sequence[Sequence]):
        m = la.to_matrix(matrix)
        if any(len(r) != len(m) for r in m):
            raise JetvarError("operator matrix must be square")
        object.__setattr__(self, "matrix", tuple(tuple(r) for r in m))

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @classmethod
    def projection(cls, dim: int, onto: Iterable[int]) -> "AlgebraOperator":
        onto = set(onto)
        return cls([[1 if (i == j and i in onto) else 0 for j in range(dim)] for i in range(dim)])

    def apply(self, v: Sequence) -> Vector:
        return la.matvec(self.matrix, _vec(v, self.dim))

    def rows(self) -> Matrix:
        return [list(r) for r in self.matrix]

    def conjugate(self, P: Sequence[Sequence]) -> "AlgebraOperator":
        """Same map written in the basis given by the columns of ``P``."""
        Pinv = la.inverse(P)
        if Pinv is None:
            raise JetvarError("change of basis must be invertible")
        return AlgebraOperator(la.matmul(la.matmul(Pinv, self.rows()), la.to_matrix(P)))


def bracket(A: LieAlgebra, u: Sequence, v: Sequence) -> Vector:
    return A.bracket(u, v)


def _check_dims(A: LieAlgebra, J: AlgebraOperator) -> None:
    if A.dim != J.dim:
        raise JetvarError(f"operator of size {J.dim} on an algebra of dimension {A.dim}")


@dataclass
class HypothesisReport:
    symmetric: bool
    projector: bool
    derivation: bool
    symmetric_witnesses: List[Tuple[int, int]] = field(default_factory=list)
    projector_witnesses: List[Tuple[int, int]] = field(default_factory=list)
    derivation_witnesses: List[Tuple[int, int, Vector]] = field(default_factory=list)

    @property
    def all(self) -> bool:
        return self.symmetric and self.projector and self.derivation

    def to_dict(self) -> dict:
        return {
            "symmetric": self.symmetric,
            "projector": self.projector,
            "derivation": self.derivation,
            "symmetric_witnesses": [list(w) for w in self.symmetric_witnesses],
            "projector_witnesses": [list(w) for w in self.projector_witnesses],
            "derivation_witnesses": [{"pair": [i, j], "defect": [str(x) for x in v]}
                                     for i, j, v in self.derivation_witnesses],
        }


def hypothesis_report(A: LieAlgebra, J: AlgebraOperator) -> HypothesisReport:
    """Check ``gJ = J^T g``, ``J^2 = J`` and the derivation rule on basis pairs."""
    _check_dims(A, J)
    d = A.dim
    M = J.rows()
    g = A.inner
    gJ = la.matmul(g, M)
    JtG = la.matmul(la.transpose(M), g)
    sym_w = [(i, j) for i in range(d) for j in range(d) if gJ[i][j] != JtG[i][j]]
    JJ = la.matmul(M, M)
    proj_w = [(i, j) for i in range(d) for j in range(d) if JJ[i][j] != M[i][j]]
    basis = la.identity(d)
    images = [J.apply(e) for e in basis]
    der_w = []
    for i in range(d):
        for j in range(i + 1, d):
            lhs = J.apply(A.bracket(basis[i], basis[j]))
            rhs = [x + y for x, y in zip(A.bracket(images[i], basis[j]), A.bracket(basis[i], images[j]))]
            defect = [x - y for x, y in zip(lhs, rhs)]
            if not _is_zero(defect):
                der_w.append((i, j, defect))
    return HypothesisReport(not sym_w, not proj_w, not der_w, sym_w, proj_w, der_w)


@dataclass
class Split:
    kernel: Matrix
    image: Matrix
    intersection_zero: bool
    dimensions_add_up: bool
    orthogonal: bool

    @property
    def certified(self) -> bool:
        return self.intersection_zero and self.dimensions_add_up and self.orthogonal

    def to_dict(self) -> dict:
        return {
            "kernel": [[str(x) for x in v] for v in self.kernel],
            "image": [[str(x) for x in v] for v in self.image],
            "intersection_zero": self.intersection_zero,
            "dimensions_add_up": self.dimensions_add_up,
            "orthogonal": self.orthogonal,
        }


def _pair(g: Matrix, u: Sequence, v: Sequence) -> Fraction:
    return sum((u[i] * g[i][j] * v[j] for i in range(len(u)) for j in range(len(v)) if u[i] and v[j]),
               Fraction(0))


def split(A: LieAlgebra, J: AlgebraOperator) -> Split:
    """Kernel and image bases of a ``g``-symmetric ``J`` with a direct-sum certificate."""
    _check_dims(A, J)
    report = hypothesis_report(A, J)
    if not report.symmetric:
        raise NotSymmetricError(
            f"operator is not symmetric for the chosen inner product; first failing entry {report.symmetric_witnesses[0]}")
    d = A.dim
    M = J.rows()
    kernel = la.nullspace(M, d)
    image = la.column_space(M)
    both = kernel + image
    intersection_zero = la.rank(both) == len(both) if both else True
    dims = len(kernel) + len(image) == d
    orthogonal = all(_pair(A.inner, k, m) == 0 for k in kernel for m in image)
    return Split(kernel, image, intersection_zero, dims, orthogonal)


@dataclass
class ReductiveReport:
    subalgebra: bool
    invariant: bool
    equality: bool
    complement_abelian: bool
    failures: List[dict] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return self.subalgebra and self.invariant

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "subalgebra": self.subalgebra,
            "invariant": self.invariant,
            "equality": self.equality,
            "complement_abelian": self.complement_abelian,
            "failures": self.failures,
        }


def reductive_check(A: LieAlgebra, k_basis: Sequence[Sequence], m_basis: Sequence[Sequence]) -> ReductiveReport:
    """Verify ``[k, k] in k`` and ``[k, m] in m`` for a direct sum ``k + m``.

    Each failing basis pair is reported with the component of its bracket
    that leaves the required subspace.  ``equality`` records whether
    ``[k, m]`` spans all of ``m``; it does not affect the verdict.
    """
    d = A.dim
    kb = [_vec(v, d) for v in k_basis]
    mb = [_vec(v, d) for v in m_basis]
    both = kb + mb
    if len(both) != d or la.rank(both) != d:
        raise SpanningError(f"the {len(kb)} + {len(mb)} given vectors do not form a basis of dimension {d}")
    change = la.transpose(both)
    inv = la.inverse(change)
    nk = len(kb)

    def parts(w: Vector) -> Tuple[Vector, Vector]:
        coords = la.matvec(inv, w)
        kpart = [sum((coords[i] * kb[i][r] for i in range(nk)), Fraction(0)) for r in range(d)]
        mpart = [w[r] - kpart[r] for r in range(d)]
        return kpart, mpart

    failures: List[dict] = []
    subalgebra = True
    for i in range(nk):
        for j in range(i + 1, nk):
            w = A.bracket(kb[i], kb[j])
            _, off = parts(w)
            if not _is_zero(off):
                subalgebra = False
                failures.append({"kind": "subalgebra", "pair": ["k", i, "k", j],
                                 "bracket": [str(x) for x in w], "outside": [str(x) for x in off]})
    invariant = True
    span_km: List[Vector] = []
    for i in range(nk):
        for j in range(len(mb)):
            w = A.bracket(kb[i], mb[j])
            off, _ = parts(w)
            if not _is_zero(off):
                invariant = False
                failures.append({"kind": "invariance", "pair": ["k", i, "m", j],
                                 "bracket": [str(x) for x in w], "outside": [str(x) for x in off]})
            span_km.append(w)
    equality = invariant and (la.rank(span_km) == len(mb) if mb and span_km else not mb)
    abelian = all(_is_zero(A.bracket(mb[i], mb[j])) for i in range(len(mb)) for j in range(i + 1, len(mb)))
    return ReductiveReport(subalgebra, invariant, equality, abelian, failures)


@dataclass
class ChainReport:
    hypotheses: HypothesisReport
    split: Optional[Split]
    reductive: Optional[ReductiveReport]

    @property
    def verdict(self) -> bool:
        """Hypotheses all hold and both certificates pass."""
        return (self.hypotheses.all and self.split is not None and self.split.certified
                and self.reductive is not None and self.reductive.verdict)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "hypotheses": self.hypotheses.to_dict(),
            "split": self.split.to_dict() if self.split else None,
            "reductive": self.reductive.to_dict() if self.reductive else None,
        }


def certify(A: LieAlgebra, J: AlgebraOperator) -> ChainReport:
    """Run hypotheses, then (for symmetric ``J``) the split and reductivity checks."""
    hyp = hypothesis_report(A, J)
    if not hyp.symmetric:
        return ChainReport(hyp, None, None)
    sp = split(A, J)
    red = reductive_check(A, sp.kernel, sp.image) if sp.certified else None
    return ChainReport(hyp, sp, red)
