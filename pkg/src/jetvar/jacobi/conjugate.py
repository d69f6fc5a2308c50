"""Numeric Jacobi fields on one-dimensional bases and conjugate-point detection.

``J v = 0`` with ``J = A2 D^2 + A1 D + A0`` is integrated as a first-order
system by fixed-step RK4.  For one field the canonical solution ``v(0) = v0``,
``v'(0) = vdot0`` is tracked; for ``m > 1`` the fundamental matrix ``V`` with
``V(0) = 0``, ``V'(0) = I`` is tracked and conjugate points are sign changes of
``det V``.  Each crossing is refined by bisecting the length of the RK4 step
that produced it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np

from ..errors import DegenerateOperatorError, JetvarError
from ..symexpr.coords import BASE, CONST, FIELD
from ..symexpr.expr import lambdify
from .operator import LinearDiffOperator

Background = Callable[[float], Mapping[str, float]]

DEFAULT_TOLERANCE = 1e-9
_DEGENERACY = 1e-12


def zero_background(t: float) -> Mapping[str, float]:
    """Sampler for the trivial solution ``y = 0``: every jet vanishes."""
    return {}


@dataclass
class JacobiTrajectory:
    """Samples ``(t, v, v')`` and the conjugate points found on ``(0, T]``.

    For systems ``v`` holds ``det V`` and ``vdot`` its derivative along the flow.
    """

    times: List[float]
    values: List[float]
    derivatives: List[float]
    conjugate_points: List[float]
    step: float
    horizon: float
    fields: int = 1
    residuals: List[float] = field(default_factory=list)

    def to_table(self, every: int = 1) -> str:
        head = "t\tv\tvdot" if self.fields == 1 else "t\tdet\tddet"
        rows = [head]
        for i in range(0, len(self.times), max(1, every)):
            rows.append(f"{self.times[i]:.9f}\t{self.values[i]:.12e}\t{self.derivatives[i]:.12e}")
        return "\n".join(rows)

    def summary(self) -> dict:
        return {
            "fields": self.fields,
            "step": self.step,
            "horizon": self.horizon,
            "samples": len(self.times),
            "conjugate_points": list(self.conjugate_points),
            "residuals": list(self.residuals),
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True)


class _Coefficients:
    """Numeric evaluator for ``A0, A1, A2`` along a background."""

    def __init__(self, J: LinearDiffOperator, background: Background, constants: Mapping[str, float]):
        self.m = J.rows
        self.background = background
        self.constants = dict(constants)
        self.funcs: Dict[Tuple[int, int, int], Callable] = {}
        self.args: Dict[Tuple[int, int, int], List[Tuple[str, str]]] = {}
        self.static: Dict[Tuple[int, int, int], float] = {}
        for (a, b, alpha), c in J.coeffs.items():
            k = alpha[0]
            coords = sorted(c.variables(), key=lambda x: x.rank)
            kinds = []
            for x in coords:
                if x.kind == CONST:
                    if x.name not in self.constants:
                        raise JetvarError(f"no numeric value for constant {x.name}")
                elif x.kind not in (BASE, FIELD):
                    raise JetvarError(f"coefficient depends on {x.name}, which has no numeric value")
                kinds.append((x.kind, x.name))
            if not coords:
                self.static[(a, b, k)] = float(c.constant_value())
            else:
                self.funcs[(a, b, k)] = lambdify(c, coords)
                self.args[(a, b, k)] = kinds
        self.time_dependent = bool(self.funcs)
        self._cache: Dict[float, Tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    def at(self, t: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        hit = self._cache.get(t)
        if hit is not None:
            return hit
        mats = [np.zeros((self.m, self.m)) for _ in range(3)]
        for (a, b, k), val in self.static.items():
            mats[k][a, b] = val
        if self.funcs:
            sample = self.background(t)
            for key, f in self.funcs.items():
                vals = []
                for kind, name in self.args[key]:
                    if kind == BASE:
                        vals.append(t)
                    elif kind == CONST:
                        vals.append(self.constants[name])
                    else:
                        vals.append(float(sample.get(name, 0.0)))
                a, b, k = key
                mats[k][a, b] = f(*vals)
        out = tuple(mats)
        if len(self._cache) > 8:
            self._cache.clear()
        self._cache[t] = out
        return out


def _check_operator(J: LinearDiffOperator) -> None:
    if J.space.n != 1:
        raise JetvarError("Jacobi fields are integrated only over a one-dimensional base")
    if J.rows != J.cols:
        raise JetvarError("the Jacobi operator must be square")
    if J.order != 2:
        raise DegenerateOperatorError(f"expected a second-order operator, got order {J.order}")


def jacobi_fields_ode(
    J: LinearDiffOperator,
    background: Optional[Background] = None,
    v0=0,
    vdot0=1,
    T: float = 4.0,
    h: float = 1e-3,
    constants: Optional[Mapping[str, float]] = None,
    t0: float = 0.0,
    tol: float = DEFAULT_TOLERANCE,
) -> JacobiTrajectory:
    """Integrate ``J v = 0`` on ``[t0, t0 + T]`` and locate conjugate points.

    ``background`` maps ``t`` to numeric values of the field jets appearing in
    the coefficients (by coordinate name); ``constants`` supplies declared
    constants.  ``v0``/``vdot0`` are used for a single field; systems always
    start from the fundamental data ``V(0) = 0``, ``V'(0) = I``.
    """
    _check_operator(J)
    if not (h > 0 and T > 0) or not np.isfinite(h) or not np.isfinite(T):
        raise JetvarError("step and horizon must be positive and finite")
    steps = int(round(T / h))
    if steps < 1 or abs(steps * h - T) > 1e-9 * max(1.0, T):
        raise JetvarError(f"horizon {T} is not a whole number of steps of size {h}")
    if steps > 50_000_000:
        raise JetvarError("too many integration steps")
    coeffs = _Coefficients(J, background or zero_background, constants or {})
    if J.rows == 1:
        return _integrate_scalar(coeffs, float(Fraction(v0)), float(Fraction(vdot0)), t0, h, steps, tol)
    return _integrate_system(coeffs, t0, h, steps, tol)


# -- scalar fast path ---------------------------------------------------------

def _scalar_rhs(coeffs: _Coefficients):
    if not coeffs.time_dependent:
        a0, a1, a2 = (float(m[0, 0]) for m in coeffs.at(0.0))
        if abs(a2) < _DEGENERACY:
            raise DegenerateOperatorError("leading coefficient vanishes")
        c0, c1 = -a0 / a2, -a1 / a2

        def rhs(t, v, w):
            return w, c0 * v + c1 * w
        return rhs

    def rhs(t, v, w):
        m0, m1, m2 = coeffs.at(t)
        a2 = m2[0, 0]
        if abs(a2) < _DEGENERACY:
            raise DegenerateOperatorError(f"leading coefficient vanishes at t = {t}")
        return w, -(m0[0, 0] * v + m1[0, 0] * w) / a2
    return rhs


def _rk4_scalar(rhs, t, v, w, h):
    k1v, k1w = rhs(t, v, w)
    k2v, k2w = rhs(t + h / 2, v + h / 2 * k1v, w + h / 2 * k1w)
    k3v, k3w = rhs(t + h / 2, v + h / 2 * k2v, w + h / 2 * k2w)
    k4v, k4w = rhs(t + h, v + h * k3v, w + h * k3w)
    return (v + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v),
            w + h / 6 * (k1w + 2 * k2w + 2 * k3w + k4w))


def _bisect(g: Callable[[float], float], lo: float, hi: float, glo: float, tol: float) -> Tuple[float, float]:
    """Root of ``g`` on ``[lo, hi]`` given a sign change; returns ``(root, |g(root)|)``."""
    best, gbest = hi, abs(g(hi))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if abs(gm) < gbest:
            best, gbest = mid, abs(gm)
        if gm == 0.0 or (abs(gm) < tol and hi - lo < 1e-12):
            return mid, abs(gm)
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    return best, gbest


def _integrate_scalar(coeffs, v, w, t0, h, steps, tol) -> JacobiTrajectory:
    rhs = _scalar_rhs(coeffs)
    times, values, ders, points, residuals = [t0], [v], [w], [], []
    t = t0
    for i in range(steps):
        nv, nw = _rk4_scalar(rhs, t, v, w, h)
        tn = t0 + (i + 1) * h
        if v != 0.0 and (nv == 0.0 or (nv > 0) != (v > 0)):
            if nv == 0.0:
                points.append(tn)
                residuals.append(0.0)
            else:
                sv, sw, st = v, w, t
                root, res = _bisect(lambda tau: _rk4_scalar(rhs, st, sv, sw, tau)[0], 0.0, h, sv, tol)
                points.append(st + root)
                residuals.append(res)
        if not (np.isfinite(nv) and np.isfinite(nw)):
            raise JetvarError(f"integration diverged near t = {tn}")
        t, v, w = tn, nv, nw
        times.append(t)
        values.append(v)
        ders.append(w)
    return JacobiTrajectory(times, values, ders, points, h, steps * h, 1, residuals)


# -- systems ------------------------------------------------------------------

def _integrate_system(coeffs: _Coefficients, t0, h, steps, tol) -> JacobiTrajectory:
    m = coeffs.m

    def reduce(t):
        A0, A1, A2 = coeffs.at(t)
        if np.linalg.cond(A2) > 1e12:
            raise DegenerateOperatorError(f"leading coefficient matrix is singular at t = {t}")
        inv = np.linalg.inv(A2)
        return -inv @ A0, -inv @ A1

    if coeffs.time_dependent:
        def rhs(t, V, W):
            M0, M1 = reduce(t)
            return W, M0 @ V + M1 @ W
    else:
        M0, M1 = reduce(t0)

        def rhs(t, V, W):
            return W, M0 @ V + M1 @ W

    def step(t, V, W, dt):
        k1v, k1w = rhs(t, V, W)
        k2v, k2w = rhs(t + dt / 2, V + dt / 2 * k1v, W + dt / 2 * k1w)
        k3v, k3w = rhs(t + dt / 2, V + dt / 2 * k2v, W + dt / 2 * k2w)
        k4v, k4w = rhs(t + dt, V + dt * k3v, W + dt * k3w)
        return (V + dt / 6 * (k1v + 2 * k2v + 2 * k3v + k4v),
                W + dt / 6 * (k1w + 2 * k2w + 2 * k3w + k4w))

    def det_and_rate(V, W):
        d = float(np.linalg.det(V))
        # d/dt det V = sum_j det(V with column j replaced by W's column j)
        rate = 0.0
        for j in range(m):
            M = V.copy()
            M[:, j] = W[:, j]
            rate += float(np.linalg.det(M))
        return d, rate

    V, W = np.zeros((m, m)), np.eye(m)
    t = t0
    d, r = det_and_rate(V, W)
    times, values, ders, points, residuals = [t], [d], [r], [], []
    for i in range(steps):
        NV, NW = step(t, V, W, h)
        tn = t0 + (i + 1) * h
        nd, nr = det_and_rate(NV, NW)
        # det V ~ t^m near the start; skip the initial zero
        if d != 0.0 and (nd == 0.0 or (nd > 0) != (d > 0)):
            if nd == 0.0:
                points.append(tn)
                residuals.append(0.0)
            else:
                sV, sW, st = V, W, t
                root, res = _bisect(lambda tau: float(np.linalg.det(step(st, sV, sW, tau)[0])),
                                    0.0, h, d, tol)
                points.append(st + root)
                residuals.append(res)
        if not (np.all(np.isfinite(NV)) and np.all(np.isfinite(NW))):
            raise JetvarError(f"integration diverged near t = {tn}")
        t, V, W, d, r = tn, NV, NW, nd, nr
        times.append(t)
        values.append(d)
        ders.append(r)
    return JacobiTrajectory(times, values, ders, points, h, steps * h, m, residuals)


def conjugate_points(J: LinearDiffOperator, T: float, h: float = 1e-3, **kwargs) -> List[float]:
    """Shorthand returning just the conjugate points of :func:`jacobi_fields_ode`."""
    return jacobi_fields_ode(J, T=T, h=h, **kwargs).conjugate_points
