import pytest
from hypothesis import given
from hypothesis import strategies as st

from jetvar import AlgebraOperator, LieAlgebra, bracket, certify, hypothesis_report, reductive_check, split
from jetvar.errors import JetvarError, NotSymmetricError, SpanningError, StructureConstantsError
from jetvar.linalg import inverse, matvec, rank

from catalog import build, random_invertible

CATALOG = build()

small = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def vectors(d):
    return st.lists(small, min_size=d, max_size=d)


def _same_span(a, b):
    return len(a) == len(b) and rank(a) == len(a) and rank(a + b) == len(a) if a or b else True


class TestBracket:
    def test_so3(self):
        assert bracket(LieAlgebra.so3(), [1, 0, 0], [0, 1, 0]) == [0, 0, 1]

    def test_dimension_mismatch(self):
        with pytest.raises(JetvarError):
            bracket(LieAlgebra.so3(), [1, 0], [0, 1, 0])

    def test_ad_and_killing(self):
        A = LieAlgebra.sl2()
        K = A.killing_form()
        assert K == [[0, 4, 0], [4, 0, 0], [0, 0, 8]]
        assert A.ad([0, 0, 1]) == [[2, 0, 0], [0, -2, 0], [0, 0, 0]]


@pytest.mark.parametrize("A", [LieAlgebra.so3(), LieAlgebra.sl2(), LieAlgebra.euclidean2(), LieAlgebra.heisenberg()],
                         ids=lambda a: a.name)
@given(data=st.data())
def test_bracket_antisymmetric(A, data):
    u = data.draw(vectors(A.dim))
    v = data.draw(vectors(A.dim))
    assert A.bracket(u, u) == [0] * A.dim
    assert A.bracket(u, v) == [-x for x in A.bracket(v, u)]


@given(vectors(6), vectors(6), vectors(6))
def test_jacobi_cyclic_sum(u, v, w):
    A = LieAlgebra.so3_r3()
    total = [a + b + c for a, b, c in zip(A.bracket(u, A.bracket(v, w)), A.bracket(v, A.bracket(w, u)),
                                           A.bracket(w, A.bracket(u, v)))]
    assert total == [0] * 6


class TestConstruction:
    def test_jacobi_identity_violation(self):
        with pytest.raises(StructureConstantsError):
            LieAlgebra.from_triples(3, [(0, 1, 2, 1), (1, 2, 1, 1)])

    def test_antisymmetry_violation(self):
        c = [[[0, 0], [0, 0]], [[0, 1], [1, 0]]]
        with pytest.raises(StructureConstantsError):
            LieAlgebra(c)

    def test_conflicting_triples(self):
        with pytest.raises(StructureConstantsError):
            LieAlgebra.from_triples(2, [(0, 1, 1, 1), (1, 0, 1, 1)])

    def test_diagonal_triple(self):
        with pytest.raises(StructureConstantsError):
            LieAlgebra.from_triples(2, [(0, 0, 1, 1)])

    def test_one_based(self):
        assert LieAlgebra.from_triples(3, [(1, 2, 3, 1), (1, 3, 2, -1)], one_based=True).c == \
            LieAlgebra.euclidean2().c

    def test_inner_product_checks(self):
        with pytest.raises(JetvarError):
            LieAlgebra.abelian(2, inner=[[1, 1], [0, 1]])
        with pytest.raises(JetvarError):
            LieAlgebra.abelian(2, inner=[[1, 1], [1, 1]])

    def test_degenerate_killing_rejected(self):
        with pytest.raises(JetvarError):
            LieAlgebra.euclidean2().with_killing_form()
        assert LieAlgebra.sl2().with_killing_form().inner == LieAlgebra.sl2().killing_form()


class TestHypotheses:
    def test_e2(self):
        rep = hypothesis_report(LieAlgebra.euclidean2(), AlgebraOperator.projection(3, [1, 2]))
        assert rep.symmetric and rep.projector and rep.derivation and rep.all

    def test_sl2_h_not_derivation(self):
        rep = hypothesis_report(LieAlgebra.sl2(), AlgebraOperator.projection(3, [2]))
        assert rep.symmetric and rep.projector and not rep.derivation
        # J[e, f] = h while [Je, f] + [e, Jf] = 0
        assert (0, 1, [0, 0, 1]) in [(i, j, list(w)) for i, j, w in rep.derivation_witnesses]

    def test_abelian_identity(self):
        rep = hypothesis_report(LieAlgebra.abelian(4), AlgebraOperator.projection(4, range(4)))
        assert rep.all

    def test_not_symmetric(self):
        rep = hypothesis_report(LieAlgebra.abelian(2), AlgebraOperator([[1, 1], [0, 0]]))
        assert rep.projector and not rep.symmetric and rep.symmetric_witnesses

    def test_not_projector(self):
        rep = hypothesis_report(LieAlgebra.abelian(2), AlgebraOperator([[2, 0], [0, 0]]))
        assert rep.symmetric and not rep.projector

    def test_symmetry_uses_inner_product(self):
        A = LieAlgebra.abelian(2, inner=[[1, 0], [0, 2]])
        J = AlgebraOperator([[0, 2], [1, 0]])
        assert hypothesis_report(A, J).symmetric
        assert not hypothesis_report(LieAlgebra.abelian(2), J).symmetric


class TestSplit:
    def test_e2(self):
        sp = split(LieAlgebra.euclidean2(), AlgebraOperator.projection(3, [1, 2]))
        assert _same_span(sp.kernel, [[1, 0, 0]])
        assert _same_span(sp.image, [[0, 1, 0], [0, 0, 1]])
        assert sp.orthogonal and sp.certified

    def test_zero(self):
        sp = split(LieAlgebra.so3(), AlgebraOperator.projection(3, []))
        assert len(sp.kernel) == 3 and sp.image == [] and sp.certified

    def test_invertible(self):
        sp = split(LieAlgebra.abelian(2), AlgebraOperator([[2, 1], [1, 3]]))
        assert sp.kernel == [] and len(sp.image) == 2 and sp.certified

    def test_non_symmetric(self):
        with pytest.raises(NotSymmetricError):
            split(LieAlgebra.abelian(2), AlgebraOperator([[1, 1], [0, 0]]))

    def test_dimension_mismatch(self):
        with pytest.raises(JetvarError):
            split(LieAlgebra.so3(), AlgebraOperator.projection(2, [0]))


class TestReductiveCheck:
    def test_e2(self):
        rep = reductive_check(LieAlgebra.euclidean2(), [[1, 0, 0]], [[0, 1, 0], [0, 0, 1]])
        assert rep.subalgebra and rep.invariant and rep.equality and rep.verdict

    def test_sl2_bad_split(self):
        rep = reductive_check(LieAlgebra.sl2(), [[1, 0, 0], [0, 1, 0]], [[0, 0, 1]])
        assert not rep.subalgebra and not rep.verdict
        witness = [f for f in rep.failures if f["kind"] == "subalgebra"]
        assert witness[0]["pair"] == ["k", 0, "k", 1]
        assert witness[0]["bracket"] == ["0", "0", "1"]

    def test_abelian_any_split(self):
        rep = reductive_check(LieAlgebra.abelian(3), [[1, 1, 0]], [[0, 1, 0], [1, 0, 1]])
        assert rep.verdict and rep.complement_abelian and not rep.equality

    def test_inclusion_without_equality(self):
        # [k, m] = 0 for the heisenberg split k = center
        rep = reductive_check(LieAlgebra.heisenberg(), [[0, 0, 1]], [[1, 0, 0], [0, 1, 0]])
        assert rep.verdict and not rep.equality and not rep.complement_abelian

    def test_invariance_failure_reported(self):
        rep = reductive_check(LieAlgebra.euclidean2(), [[1, 0, 0]], [[0, 1, 0], [1, 0, 1]])
        assert not rep.invariant
        assert any(f["kind"] == "invariance" for f in rep.failures)

    def test_spanning(self):
        with pytest.raises(SpanningError):
            reductive_check(LieAlgebra.so3(), [[1, 0, 0]], [[2, 0, 0], [0, 1, 0]])
        with pytest.raises(SpanningError):
            reductive_check(LieAlgebra.so3(), [[1, 0, 0]], [[0, 1, 0]])


def test_catalog_size():
    assert len(CATALOG) >= 10
    assert sum(p.expect for p in CATALOG) >= 5 and sum(not p.expect for p in CATALOG) >= 3


@pytest.mark.parametrize("pair", CATALOG, ids=lambda p: p.name)
def test_theorem_chain(pair):
    chain = certify(pair.algebra, pair.operator)
    assert chain.hypotheses.all == pair.expect
    if chain.hypotheses.all:
        assert chain.split.certified
        assert chain.reductive.verdict
        assert chain.reductive.complement_abelian
        assert chain.verdict


@pytest.mark.parametrize("pair", [p for p in CATALOG if p.expect], ids=lambda p: p.name)
def test_split_basis_independent(pair):
    import random
    rng = random.Random(pair.name)
    d = pair.algebra.dim
    P = random_invertible(rng, d)
    Pinv = inverse(P)
    base = split(pair.algebra, pair.operator)
    moved = split(pair.algebra.conjugate(P), pair.operator.conjugate(P))
    assert _same_span(moved.kernel, [matvec(Pinv, v) for v in base.kernel])
    assert _same_span(moved.image, [matvec(Pinv, v) for v in base.image])
    assert certify(pair.algebra.conjugate(P), pair.operator.conjugate(P)).verdict


@given(st.integers(1, 3).flatmap(lambda k: st.lists(st.lists(st.integers(-3, 3), min_size=k, max_size=k),
                                                     min_size=k, max_size=k)))
def test_semidirect_translations_always_certify(action):
    k = len(action)
    A = LieAlgebra.semidirect(action)
    chain = certify(A, AlgebraOperator.projection(k + 1, range(1, k + 1)))
    assert chain.verdict
    invertible = rank(action) == k
    assert chain.reductive.equality == invertible


def test_chain_report_serializable():
    import json
    chain = certify(LieAlgebra.sl2(), AlgebraOperator.projection(3, [2]))
    data = json.loads(json.dumps(chain.to_dict()))
    assert data["verdict"] is False
    assert data["hypotheses"]["derivation"] is False
