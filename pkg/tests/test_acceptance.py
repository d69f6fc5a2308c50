"""Acceptance criteria 1-9.

Each test is named ``test_criterion_<k>_...``; ``conftest.py`` turns their
outcomes into one PASS/FAIL line per criterion at the end of the run.
"""

import math
import random
import time

import numpy as np
import pytest
from hypothesis import given, settings

from jetvar import (
    GaugeLift,
    JetSpace,
    Lagrangian,
    ProjectableVectorField,
    bianchi_identities,
    d_H,
    euler_lagrange,
    formal_adjoint,
    hessian_identity_residual,
    jacobi_fields_ode,
    linearize,
    noether_current,
    self_adjoint_report,
    total_derivative,
)
from jetvar.jetspace import divergence
from jetvar.reductive import AlgebraOperator, LieAlgebra, certify, reductive_check
from jetvar.symexpr import normalize

from catalog import build
from corpus import BY_NAME, CORPUS
from oracles import gateaux_check, random_sample
from strategies import (
    OPS_JETS,
    SPACE,
    SPACE3,
    expressions,
    horizontal_forms,
    operators,
    polys3,
    small_polys,
)

PROPERTY_CASES = 200


# 1 ------------------------------------------------------------------------

def test_criterion_1_self_adjointness():
    ns = {e.n for e in CORPUS}
    ms = {e.m for e in CORPUS}
    assert len(CORPUS) >= 25
    assert ns == {1, 2, 3} and ms == {1, 2, 3}
    assert max(e.order for e in CORPUS) <= 3 and {1, 2, 3} <= {e.order for e in CORPUS}
    for name in ("oscillator", "klein_gordon", "maxwell_3d_euclidean", "sigma_quartic"):
        assert name in BY_NAME

    start = time.perf_counter()
    failures = []
    for entry in CORPUS:
        rep = self_adjoint_report(linearize(euler_lagrange(entry.lagrangian())))
        if not rep.verdict or rep.discrepancy:
            failures.append(entry.name)
    S = JetSpace(["x"], ["y"], order=4)
    planted = self_adjoint_report(linearize([S.parse("y_x")]))
    elapsed = time.perf_counter() - start
    print(f"criterion 1: {len(CORPUS)} Lagrangians in {elapsed:.2f} s")
    assert failures == []
    assert not planted.verdict and planted.discrepancy
    assert elapsed < 60


# 2 ------------------------------------------------------------------------

def test_criterion_2_hessian_identity():
    bad = [e.name for e in CORPUS if not all(r.is_zero for r in hessian_identity_residual(e.lagrangian()))]
    assert bad == []


# 3 ------------------------------------------------------------------------

@pytest.mark.parametrize("entry", CORPUS, ids=lambda e: e.name)
def test_criterion_3_euler_oracle(entry):
    E = euler_lagrange(entry.lagrangian())
    rng = np.random.default_rng(sum(map(ord, entry.name)))
    worst = 0.0
    for _ in range(20):
        sample = random_sample(rng, entry.n, entry.m)
        res = gateaux_check(entry.space(), entry.density, E, sample, entry.constant_values())
        worst = max(worst, res.relative_error)
    assert worst <= 1e-6, worst


# 4 ------------------------------------------------------------------------

def _random_current(rng: random.Random, space: JetSpace):
    pool = [c for c in space.coordinates
            if c.kind == "base" or (c.kind == "field-jet" and c.order <= 2)]
    comps = []
    for _ in range(space.n):
        e = space.zero()
        for _ in range(rng.randint(1, 3)):
            term = space.const(rng.randint(-3, 3))
            for c in rng.sample(pool, rng.randint(1, 3)):
                term = term * space.var(c)
            e = e + term
        if rng.random() < 0.2:
            e = e / (space.const(1) + space.var(space.field(0)) ** 2)
        comps.append(e)
    return comps


def test_criterion_4_divergence_annihilation():
    rng = random.Random(4)
    spaces = [JetSpace(["t"], ["y", "z"], order=6), JetSpace(["t", "x"], ["y"], order=6),
              JetSpace(["t", "x", "z"], ["y", "u"], order=6)]
    count = 0
    for k in range(120):
        eps = _random_current(rng, spaces[k % 3])
        assert euler_lagrange(Lagrangian(divergence(eps))).is_zero, eps
        count += 1
    assert count >= 100


# 5 ------------------------------------------------------------------------

def test_criterion_5_noether():
    pairs = 0
    for entry in CORPUS:
        lam = entry.lagrangian()
        fields = entry.vector_fields() + [("zero", ProjectableVectorField.zero(lam.space))]
        for name, V in fields:
            nc = noether_current(lam, V)
            pairing = sum((v * E for v, E in zip(nc.vertical, nc.euler_lagrange)), lam.space.zero())
            assert (divergence(nc.components) - nc.residual + pairing).is_zero, (entry.name, name)
            assert nc.is_symmetry, (entry.name, name)
            pairs += 1
    assert pairs >= 60

    osc = BY_NAME["oscillator"]
    S = osc.space()
    nc = noether_current(osc.lagrangian(), ProjectableVectorField.translation(S, 0))
    assert nc.components == [S.parse("-(1/2)*y_t^2 - (1/2)*y^2")]
    E = nc.euler_lagrange[0]
    assert E == S.parse("-(y_tt + y)")
    assert total_derivative(nc.components[0], 0) == S.parse("y_t") * E


# 6 ------------------------------------------------------------------------

def test_criterion_6_bianchi():
    for name, grad in (("maxwell_3d_euclidean", ["w_x", "w_y", "w_z"]),
                       ("maxwell_3d_lorentzian", ["w_t", "w_x", "w_y"]),
                       ("maxwell_2d_lorentzian", ["w_t", "w_x"])):
        entry = BY_NAME[name]
        S = entry.space()
        ids = bianchi_identities(entry.lagrangian(), GaugeLift.from_variations(S, grad, params=["w"]))
        assert ids and all(b.is_zero for b in ids), name
        fake = ["w"] + ["0"] * (entry.m - 1)
        ids = bianchi_identities(entry.lagrangian(), GaugeLift.from_variations(S, fake, params=["w"]))
        assert not all(b.is_zero for b in ids), name


# 7 ------------------------------------------------------------------------

@pytest.mark.parametrize("text,expected", [("-(y_tt + y)", math.pi), ("-(y_tt + 4*y)", math.pi / 2)])
def test_criterion_7_conjugate_points(text, expected):
    S = JetSpace(["t"], ["y"], order=4)
    J = linearize([S.parse(text)])
    start = time.perf_counter()
    traj = jacobi_fields_ode(J, v0=0, vdot0=1, T=4.0, h=1e-3)
    elapsed = time.perf_counter() - start
    assert abs(traj.conjugate_points[0] - expected) < 1e-6
    assert elapsed < 1.0


# 8 ------------------------------------------------------------------------

def test_criterion_8_reductive_chain():
    start = time.perf_counter()
    catalog = build()
    assert len(catalog) >= 10
    passing = 0
    for pair in catalog:
        chain = certify(pair.algebra, pair.operator)
        if chain.hypotheses.all:
            passing += 1
            assert chain.split.certified, pair.name
            assert chain.reductive.verdict, pair.name
            assert chain.reductive.complement_abelian, pair.name
    e2 = certify(LieAlgebra.euclidean2(), AlgebraOperator.projection(3, [1, 2]))
    sl2 = reductive_check(LieAlgebra.sl2(), [[1, 0, 0], [0, 1, 0]], [[0, 0, 1]])
    elapsed = time.perf_counter() - start
    assert passing >= 5
    assert e2.verdict
    assert not sl2.verdict and sl2.failures and sl2.failures[0]["pair"] == ["k", 0, "k", 1]
    assert elapsed < 1.0, elapsed


# 9 ------------------------------------------------------------------------

def _run_property(strategy, check):
    count = 0

    @settings(max_examples=PROPERTY_CASES, deadline=None, database=None)
    @given(strategy)
    def prop(x):
        nonlocal count
        count += 1
        check(x)

    prop()
    return count


def test_criterion_9_property_suites():
    counts = {
        "d_H^2 (n=2)": _run_property(horizontal_forms(SPACE, small_polys), lambda w: d_H(d_H(w)).is_zero or _fail(w)),
        "d_H^2 (n=3)": _run_property(horizontal_forms(SPACE3, polys3()), lambda w: d_H(d_H(w)).is_zero or _fail(w)),
        "D commutation": _run_property(small_polys, lambda f: (
            total_derivative(total_derivative(f, 0), 1) == total_derivative(total_derivative(f, 1), 0)) or _fail(f)),
        "adjoint involution": _run_property(operators(OPS_JETS), lambda L: (
            formal_adjoint(formal_adjoint(L)) == L) or _fail(L)),
        "normalization idempotence": _run_property(expressions, lambda e: (
            normalize(normalize(e)) == normalize(e) == e) or _fail(e)),
    }
    print("criterion 9 cases:", counts)
    assert all(c >= PROPERTY_CASES for c in counts.values()), counts


def _fail(x):
    raise AssertionError(f"property violated for {x!r}")
