import warnings
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from jetvar import (
    HorizontalForm,
    JetSpace,
    MultiIndex,
    ProjectableVectorField,
    d_H,
    d_V,
    prolong,
    total_derivative,
    total_derivative_multi,
    vertical_part,
)
from jetvar.errors import JetvarError, OrderOverflowError
from jetvar.jetspace import DegreeOverflowWarning, divergence, generalized_lie_derivative, jets_of
from jetvar.symexpr import eval_numeric

from oracles import prolongation_by_flow
from strategies import FIRST, LOW, SPACE, SPACE3, coefficients, horizontal_forms, polynomials, polys3, small_polys

@pytest.fixture(scope="module")
def S():
    return JetSpace(["t", "x"], ["y"], order=3)


@pytest.fixture(scope="module")
def S1():
    return JetSpace(["x"], ["y"], order=4)


class TestMultiIndex:
    def test_arithmetic(self):
        a = MultiIndex((1, 2))
        assert a.order == 3
        assert a.add(0) == (2, 2)
        assert a + MultiIndex((1, 1)) == (2, 3)
        assert a.directions() == [0, 1, 1]
        assert a.smallest_direction() == 0

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            MultiIndex((1, -1))

    def test_canonical_iteration_order(self, S):
        alphas = list(S.multi_indices(2))
        assert alphas == sorted(alphas, key=lambda a: a.sort_key())
        assert alphas[0] == (0, 0) and alphas[1:3] == [(0, 1), (1, 0)]


class TestJetSpace:
    def test_sizes(self, S):
        assert (S.n, S.m, S.p, S.s_max) == (2, 1, 0, 3)

    @pytest.mark.parametrize("kwargs", [
        dict(base=[], fields=["y"]),
        dict(base=["x"], fields=[]),
        dict(base=["x"], fields=["y"], order=0),
        dict(base=["xy"], fields=["y"]),
        dict(base=["x"], fields=["x"]),
        dict(base=["x", "t"], fields=["y"], metric=[[1, 0], [0, 0]]),
        dict(base=["x", "t"], fields=["y"], metric=[[1, 2], [0, 1]]),
    ])
    def test_invalid_declarations(self, kwargs):
        with pytest.raises(JetvarError):
            JetSpace(**kwargs)

    def test_order_cap(self, monkeypatch):
        monkeypatch.setenv("JETVAR_ORDER_CAP", "3")
        with pytest.raises(OrderOverflowError):
            JetSpace(["x"], ["y"], order=4)

    def test_jet_names_sorted(self, S):
        assert S.field(0, (1, 2)).name == "y_txx"
        assert S.lookup("y_xtx") == S.lookup("y_txx")


class TestTotalDerivative:
    def test_chain_rule(self, S):
        assert total_derivative(S.parse("(1/2)*y^2"), 1) == S.parse("y*y_x")

    def test_jet_shift(self, S):
        assert total_derivative(S.parse("y_x"), 1) == S.parse("y_xx")

    def test_explicit_base_dependence(self, S):
        assert total_derivative(S.parse("t*y"), 0) == S.parse("y + t*y_t")

    def test_quotient(self, S):
        f = S.parse("1/(1 + y^2)")
        assert total_derivative(f, 0) == S.parse("-2*y*y_t/(1 + y^2)^2")

    def test_multi(self, S):
        assert total_derivative_multi(S.parse("y"), (0, 2)) == S.parse("y_xx")
        f = S.parse("y_t*y^2")
        assert total_derivative_multi(f, (0, 0)) == f
        assert total_derivative_multi(S.parse("x*t"), (1, 1)) == S.const(1)

    def test_overflow(self, S):
        with pytest.raises(OrderOverflowError):
            total_derivative(S.parse("y_txx"), 0)
        with pytest.raises(OrderOverflowError):
            total_derivative_multi(S.parse("y_x"), (1, 2))

    def test_divergence(self, S):
        assert divergence([S.parse("y"), S.parse("y_t")]) == S.parse("y_t + y_tx")


@given(small_polys)
def test_total_derivatives_commute(f):
    assert total_derivative(total_derivative(f, 0), 1) == total_derivative(total_derivative(f, 1), 0)


@given(polynomials(LOW), polynomials(LOW))
def test_leibniz(f, g):
    for mu in range(SPACE.n):
        assert total_derivative(f * g, mu) == total_derivative(f, mu) * g + f * total_derivative(g, mu)


@given(small_polys)
def test_multi_independent_of_order(f):
    stepwise = total_derivative(total_derivative(total_derivative(f, 1), 0), 1)
    assert total_derivative_multi(f, (1, 2)) == stepwise


class TestVerticalPart:
    def test_vertical(self, S):
        V = ProjectableVectorField(S, [0, 0], [S.parse("y*t")])
        assert vertical_part(V) == [S.parse("y*t")]

    def test_translation(self, S1):
        V = ProjectableVectorField.translation(S1, 0)
        assert vertical_part(V) == [S1.parse("-y_x")]
        assert generalized_lie_derivative(V) == [S1.parse("y_x")]

    def test_not_projectable(self, S):
        with pytest.raises(JetvarError):
            ProjectableVectorField(S, [S.parse("y"), 0], [0])


class TestProlong:
    def test_constant_vertical(self, S):
        comps = prolong(ProjectableVectorField(S, [0, 0], [1]), 2)[0]
        assert comps[MultiIndex((0, 0))] == S.const(1)
        assert all(v.is_zero for a, v in comps.items() if a.order >= 1)

    def test_linear_vertical(self, S1):
        comps = prolong(ProjectableVectorField(S1, [0], [S1.parse("y")]), 2)[0]
        assert comps[MultiIndex((1,))] == S1.parse("y_x")
        assert comps[MultiIndex((2,))] == S1.parse("y_xx")

    def test_translation_is_invisible(self, S1):
        comps = prolong(ProjectableVectorField.translation(S1, 0), 2)[0]
        assert all(v.is_zero for v in comps.values())

    def test_overflow(self, S1):
        V = ProjectableVectorField(S1, [S1.parse("x")], [S1.parse("y_xx")])
        prolong(V, 2)
        with pytest.raises(OrderOverflowError):
            prolong(V, 3)


def _flows_1d():
    e = sympy.exp
    return {
        "translation": ("1", "0", lambda b, s: [b[0] + s], lambda b, s: [b[0] - s], lambda b, ys, s: ys),
        "dilation": ("x", "0", lambda b, s: [e(s) * b[0]], lambda b, s: [e(-s) * b[0]], lambda b, ys, s: ys),
        "projective": ("x^2", "0", lambda b, s: [b[0] / (1 - s * b[0])], lambda b, s: [b[0] / (1 + s * b[0])],
                       lambda b, ys, s: ys),
        "fiber_scaling": ("0", "y", lambda b, s: b, lambda b, s: b, lambda b, ys, s: [e(s) * ys[0]]),
        "fiber_shift": ("0", "x", lambda b, s: b, lambda b, s: b, lambda b, ys, s: [ys[0] + s * b[0]]),
        "mixed": ("x", "y + 1", lambda b, s: [e(s) * b[0]], lambda b, s: [e(-s) * b[0]],
                  lambda b, ys, s: [e(s) * (ys[0] + 1) - 1]),
    }


@pytest.mark.parametrize("name", list(_flows_1d()))
@pytest.mark.parametrize("x0", ["1/3", "-2/5"])
def test_prolongation_matches_flow_1d(S1, name, x0):
    xi, Xi, fb, ib, ff = _flows_1d()[name]
    V = ProjectableVectorField(S1, [S1.parse(xi)], [S1.parse(Xi)])
    X = sympy.Symbol("x")
    section = 2 - X + sympy.Rational(1, 2) * X ** 2 + 3 * X ** 3 - X ** 5
    comps = prolong(V, 3)[0]
    for alpha, comp in comps.items():
        expected, point = prolongation_by_flow(S1, fb, ib, ff, [section], alpha, [x0])
        got = eval_numeric(comp, {k: Fraction(str(v)) for k, v in point.items()})
        assert got == Fraction(str(expected[0])), (name, alpha)


def test_prolongation_matches_flow_rotation():
    S = JetSpace(["t", "x"], ["y", "z"], order=3)
    V = ProjectableVectorField(S, [S.parse("-x"), S.parse("t")], [S.parse("-z"), S.parse("y")])
    c, s_ = sympy.cos, sympy.sin

    def rot(b, s):
        return [b[0] * c(s) - b[1] * s_(s), b[0] * s_(s) + b[1] * c(s)]

    def fiber(b, ys, s):
        return [ys[0] * c(s) - ys[1] * s_(s), ys[0] * s_(s) + ys[1] * c(s)]

    T, X = sympy.symbols("t x")
    sections = [T ** 2 * X - X + 1, T * X ** 3 + 2 * T]
    comps = prolong(V, 2)
    for a in range(2):
        for alpha, comp in comps[a].items():
            expected, point = prolongation_by_flow(S, rot, lambda b, s: rot(b, -s), fiber, sections, alpha,
                                                   ["1/2", "-1/3"])
            got = eval_numeric(comp, {k: Fraction(str(v)) for k, v in point.items()})
            assert got == Fraction(str(expected[a])), (a, alpha)


base_polys = polynomials([SPACE.lookup("t"), SPACE.lookup("x")], max_terms=3, max_factors=2)
fiber_polys = polynomials(FIRST, max_terms=3, max_factors=2).filter(
    lambda e: all(c.kind != "parameter-jet" for c in e.variables()))
vector_fields = st.builds(lambda a, b, c, d: ProjectableVectorField(SPACE, [a, b], [c, d]),
                          base_polys, base_polys, fiber_polys, fiber_polys)


@given(vector_fields)
def test_prolong_commutes_with_vertical_part(V):
    W = ProjectableVectorField(SPACE, [0, 0], vertical_part(V))
    full, vert = prolong(V, 2), prolong(W, 2)
    for a in range(SPACE.m):
        for alpha, comp in full[a].items():
            horizontal = sum((SPACE.var(SPACE.field(a, alpha.add(nu))) * xn for nu, xn in enumerate(V.xi)),
                             SPACE.zero())
            assert vert[a][alpha] == comp - horizontal


@given(vector_fields, vector_fields, coefficients)
def test_prolong_linear(V1, V2, c):
    lhs = prolong(V1 + V2.scale(c), 2)
    p1, p2 = prolong(V1, 2), prolong(V2, 2)
    for a in range(SPACE.m):
        for alpha in lhs[a]:
            assert lhs[a][alpha] == p1[a][alpha] + c * p2[a][alpha]


@given(fiber_polys)
def test_vertical_prolongation_is_total_derivative(v):
    W = ProjectableVectorField(SPACE, [0, 0], [v, SPACE.zero()])
    comps = prolong(W, 3)[0]
    for alpha, comp in comps.items():
        assert comp == total_derivative_multi(v, alpha)
    assert comps == jets_of(v, 3)


class TestForms:
    def test_example_2d(self, S):
        f = S.parse("y*x")
        out = d_H(HorizontalForm(S, 1, {(1,): f}))
        assert out.degree == 2 and out.coeffs == {(0, 1): total_derivative(f, 0)}

    def test_current_divergence(self, S):
        eps = [S.parse("y^2"), S.parse("t*y_x")]
        out = d_H(HorizontalForm.current(eps))
        assert out.density_coefficient() == divergence(eps)
        assert HorizontalForm.current(eps).current_components() == eps

    def test_top_degree(self, S):
        with pytest.warns(DegreeOverflowWarning):
            out = d_H(HorizontalForm.density(S.parse("y")))
        assert out.is_zero and out.truncated

    def test_bad_index(self, S):
        with pytest.raises(JetvarError):
            HorizontalForm(S, 1, {(2,): S.parse("y")})
        with pytest.raises(JetvarError):
            HorizontalForm(S, 2, {(1, 0): S.parse("y")})

    def test_d_V_examples(self, S):
        y, yt, yx = (S.lookup(n) for n in ("y", "y_t", "y_x"))
        assert d_V(S.parse("(1/2)*y_x^2")) == {yx: S.parse("y_x")}
        assert d_V(S.parse("x")) == {}
        assert d_V(S.parse("y*y_t")) == {y: S.parse("y_t"), yt: S.parse("y")}


@given(horizontal_forms(SPACE, small_polys))
def test_d_H_squared_2d(omega):
    assert d_H(d_H(omega)).is_zero


@given(horizontal_forms(SPACE3, polys3()))
def test_d_H_squared_3d(omega):
    assert d_H(d_H(omega)).is_zero


@given(st.lists(polys3(), min_size=3, max_size=3), st.lists(polys3(), min_size=3, max_size=3))
def test_d_H_linear(a, b):
    f = HorizontalForm(SPACE3, 1, {(0,): a[0], (1,): a[1], (2,): a[2]})
    g = HorizontalForm(SPACE3, 1, {(0,): b[0], (1,): b[1], (2,): b[2]})
    fg = HorizontalForm(SPACE3, 1, {(i,): a[i] + b[i] for i in range(3)})
    lhs, r1, r2 = d_H(fg), d_H(f), d_H(g)
    for key in set(lhs.coeffs) | set(r1.coeffs) | set(r2.coeffs):
        assert lhs.coefficient(key) == r1.coefficient(key) + r2.coefficient(key)


def test_degree_three_forms_close():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        omega = HorizontalForm(SPACE3, 1, {(0,): SPACE3.parse("y_x*y"), (2,): SPACE3.parse("t*y_z")})
        assert d_H(d_H(omega)).is_zero
