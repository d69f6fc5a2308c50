"""``jetvar <command> <model-file> [flags]``.

Exit codes: 0 when every verdict passes, 1 when a mathematical verdict
fails, 2 for input errors (unreadable or malformed model, missing blocks,
order overflow, unsupported requests).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from typing import Callable, Dict, List, Optional, Sequence

from .. import __version__
from ..errors import AnsatzTooLargeError, JetvarError
from ..jacobi import (
    jacobi_fields_ode,
    jacobi_operator,
    linearize,
    self_adjoint_report,
)
from ..reductive import certify, hypothesis_report, reductive_check
from ..symexpr.coords import FIELD
from ..symexpr.expr import substitute
from ..variational import (
    bianchi_identities,
    euler_lagrange,
    is_on_shell_zero,
    noether_current,
)
from ..jetspace.derivatives import divergence
from .modelfile import Model, load_model

SCHEMA = 1
EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(JetvarError):
    """The request cannot be answered for this model."""


class Report:
    def __init__(self, command: str, model: Model):
        self.command = command
        self.model = model
        self.verdicts: Dict[str, bool] = {}
        self.results: dict = {}
        self.lines: List[str] = []

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self, seconds: float) -> dict:
        return {
            "schema": SCHEMA,
            "command": self.command,
            "model": {"sha256": self.model.sha256},
            "passed": self.passed,
            "verdicts": dict(self.verdicts),
            "results": self.results,
            "timing": {"seconds": round(seconds, 6)},
        }


def _need_lagrangian(model: Model):
    if model.lagrangian is None:
        raise InputError("the model has no lagrangian block")
    return model.lagrangian


def _named(space, values) -> Dict[str, str]:
    return {name: str(v) for name, v in zip(space.field_names, values)}


def cmd_el(model: Model, args) -> Report:
    lam = _need_lagrangian(model)
    E = euler_lagrange(lam)
    rep = Report("el", model)
    rep.results = {"euler_lagrange": _named(lam.space, E), "order": E.order}
    rep.lines = [f"E_{f} = {e}" for f, e in zip(lam.space.field_names, E)]
    return rep


def cmd_selfadjoint(model: Model, args) -> Report:
    if model.euler is not None:
        E, origin = model.euler, "euler block"
    elif model.lagrangian is not None:
        E, origin = euler_lagrange(model.lagrangian), "lagrangian"
    else:
        raise InputError("the model has neither a lagrangian nor an euler block")
    space = model.space
    L = linearize(E)
    report = self_adjoint_report(L)
    rep = Report("selfadjoint", model)
    rep.verdicts["self_adjoint"] = report.verdict
    rep.results = {
        "source": origin,
        "operator": L.table(),
        "operator_text": str(L),
        "self_adjoint": report.verdict,
        "discrepancy": report.describe(space),
    }
    rep.lines = [f"linearized operator ({origin}):", _indent(str(L)),
                 f"self-adjoint: {'yes' if report.verdict else 'no'}"]
    for d in report.describe(space):
        rep.lines.append(f"  (L - L+)[{d['row']},{d['col']}] {d['derivative'] or '1'}: {d['difference']}")
    return rep


def cmd_noether(model: Model, args) -> Report:
    lam = _need_lagrangian(model)
    if args.field not in model.vectorfields:
        known = ", ".join(sorted(model.vectorfields)) or "none"
        raise InputError(f"unknown vectorfield {args.field!r} (declared: {known})")
    V = model.vectorfields[args.field]
    space = lam.space
    nc = noether_current(lam, V)
    comps = nc.components
    rep = Report("noether", model)
    rep.verdicts["symmetry"] = nc.is_symmetry
    rep.results = {
        "vectorfield": args.field,
        "current": {b: str(c) for b, c in zip(space.base_names, comps)},
        "lie_derivative": str(nc.residual),
        "symmetry": nc.is_symmetry,
        "off_shell_identity": True,
    }
    rep.lines = [f"vector field {args.field}:"]
    rep.lines += [f"  eps^{b} = {c}" for b, c in zip(space.base_names, comps)]
    rep.lines.append(f"  Lie derivative of L dx: {nc.residual}")
    if nc.is_symmetry:
        div = divergence(comps)
        try:
            res = is_on_shell_zero(div, list(nc.euler_lagrange), 0)
            cert = {_d_label(space, alpha) + f"E_{space.field_names[a]}": str(c)
                    for (a, alpha), c in sorted(res.certificate.items())}
            rep.results["on_shell"] = {"conserved": res.holds, "certificate": cert}
            rep.lines.append(f"  conserved on shell: {'yes' if res.holds else 'no'}"
                             + (f"  (div eps = {' + '.join(f'({c})*{k}' for k, c in cert.items())})" if cert else ""))
        except (AnsatzTooLargeError, JetvarError) as exc:
            rep.results["on_shell"] = {"conserved": None, "note": str(exc)}
            rep.lines.append(f"  on-shell certificate unavailable: {exc}")
    return rep


def cmd_bianchi(model: Model, args) -> Report:
    lam = _need_lagrangian(model)
    if not model.lifts:
        raise InputError("the model has no lift block")
    name = args.lift or (next(iter(model.lifts)) if len(model.lifts) == 1 else None)
    if name is None:
        raise InputError(f"several lifts declared; choose one with --lift ({', '.join(sorted(model.lifts))})")
    if name not in model.lifts:
        raise InputError(f"unknown lift {name!r}")
    Z = model.lifts[name]
    ids = bianchi_identities(lam, Z)
    space = lam.space
    rep = Report("bianchi", model)
    rep.verdicts["identities_vanish"] = all(e.is_zero for e in ids)
    rep.results = {"lift": name,
                   "identities": {space.param_names[A]: str(e) for A, e in zip(Z.params, ids)}}
    rep.lines = [f"lift {name}:"] + [f"  B_{space.param_names[A]} = {e}" for A, e in zip(Z.params, ids)]
    return rep


def cmd_jacobi(model: Model, args) -> Report:
    lam = _need_lagrangian(model)
    Z = None
    if args.lift:
        if args.lift not in model.lifts:
            raise InputError(f"unknown lift {args.lift!r}")
        Z = model.lifts[args.lift]
    J = jacobi_operator(lam, Z)
    sa = self_adjoint_report(J)
    rep = Report("jacobi", model)
    rep.verdicts["self_adjoint"] = sa.verdict
    rep.results = {"lift": args.lift or "identity", "operator": J.table(), "operator_text": str(J),
                   "self_adjoint": sa.verdict, "discrepancy": sa.describe(lam.space)}
    rep.lines = [f"Jacobi operator ({args.lift or 'identity lift'}):", _indent(str(J)),
                 f"self-adjoint: {'yes' if sa.verdict else 'no'}"]
    if Z is None:
        same = J == linearize(euler_lagrange(lam))
        rep.verdicts["equals_linearized_el"] = same
        rep.results["equals_linearized_el"] = same
        rep.lines.append(f"equals linearized Euler-Lagrange operator: {'yes' if same else 'no'}")
    return rep


def cmd_conjugate(model: Model, args) -> Report:
    lam = _need_lagrangian(model)
    space = lam.space
    if space.n != 1:
        raise InputError("conjugate points are supported only for one-dimensional bases")
    E = euler_lagrange(lam)
    zero = {c: 0 for c in space.coordinates if c.kind == FIELD}
    if not all(substitute(e, zero).is_zero for e in E):
        raise InputError("y = 0 is not a solution of the Euler-Lagrange equations; no background available")
    J = linearize(E)
    constants = {k: float(v) for k, v in model.constant_values.items()}
    try:
        traj = jacobi_fields_ode(J, T=args.tmax, h=args.step, constants=constants)
    except JetvarError as exc:
        raise InputError(str(exc)) from exc
    rep = Report("conjugate", model)
    rep.results = {"operator_text": str(J), "background": "zero", **traj.summary()}
    pts = traj.conjugate_points
    rep.lines = [f"Jacobi operator: {J}",
                 f"conjugate points on (0, {args.tmax}]: " + (", ".join(f"{t:.10f}" for t in pts) or "none")]
    if args.table:
        rep.lines.append(traj.to_table(every=args.every))
    return rep


def cmd_reductive(model: Model, args) -> Report:
    spec = model.algebra
    if spec is None:
        raise InputError("the model has no algebra block")
    A = spec.algebra
    rep = Report("reductive", model)
    if spec.kernel is not None:
        red = reductive_check(A, spec.kernel, spec.image)
        rep.verdicts["reductive"] = red.verdict
        rep.results = {"split": "explicit", "reductive": red.to_dict()}
        if spec.operator is not None:
            rep.results["hypotheses"] = hypothesis_report(A, spec.operator).to_dict()
        rep.lines = _reductive_lines(red)
        return rep
    if spec.operator is None:
        raise InputError("the algebra block needs an operator ('row' lines) or an explicit split")
    chain = certify(A, spec.operator)
    h = chain.hypotheses
    rep.verdicts["hypotheses"] = h.all
    rep.results = chain.to_dict()
    rep.results["split_kind"] = "kernel/image"
    rep.lines = [f"symmetric: {_yn(h.symmetric)}  projector: {_yn(h.projector)}  derivation: {_yn(h.derivation)}"]
    for i, j, defect in h.derivation_witnesses:
        rep.lines.append(f"  derivation fails on (e{i + 1}, e{j + 1}): defect {[str(x) for x in defect]}")
    if chain.split is not None:
        sp = chain.split
        rep.verdicts["split"] = sp.certified
        rep.lines.append(f"kernel: {_vectors(sp.kernel)}")
        rep.lines.append(f"image:  {_vectors(sp.image)}")
        rep.lines.append(f"direct sum: {_yn(sp.intersection_zero and sp.dimensions_add_up)}  orthogonal: {_yn(sp.orthogonal)}")
    if chain.reductive is not None:
        rep.verdicts["reductive"] = chain.reductive.verdict
        rep.lines += _reductive_lines(chain.reductive)
    return rep


def _reductive_lines(red) -> List[str]:
    lines = [f"subalgebra: {_yn(red.subalgebra)}  [k,m] in m: {_yn(red.invariant)}  "
             f"[k,m] = m: {_yn(red.equality)}  [m,m] = 0: {_yn(red.complement_abelian)}"]
    for f in red.failures:
        lines.append(f"  {f['kind']} fails on {f['pair']}: bracket {f['bracket']}, outside part {f['outside']}")
    return lines


def _d_label(space, alpha) -> str:
    parts = [f"D_{b}" + (f"^{k}" if k > 1 else "") for b, k in zip(space.base_names, alpha) if k]
    return "*".join(parts) + " " if parts else ""


def _yn(b: bool) -> str:
    return "yes" if b else "no"


def _vectors(vs) -> str:
    return "[" + ", ".join("(" + " ".join(str(x) for x in v) + ")" for v in vs) + "]"


def _indent(text: str) -> str:
    return "\n".join("  " + line for line in text.splitlines())


COMMANDS: Dict[str, Callable] = {
    "el": cmd_el,
    "selfadjoint": cmd_selfadjoint,
    "noether": cmd_noether,
    "bianchi": cmd_bianchi,
    "jacobi": cmd_jacobi,
    "conjugate": cmd_conjugate,
    "reductive": cmd_reductive,
}


def _positive_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (x > 0 and math.isfinite(x)):
        raise argparse.ArgumentTypeError("must be positive and finite")
    return x


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jetvar", description="Variational calculus on jet spaces.")
    parser.add_argument("--version", action="version", version=f"jetvar {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "el": "print the Euler-Lagrange expressions",
        "selfadjoint": "check self-adjointness of the linearized Euler-Lagrange operator",
        "noether": "Noether current of a declared vector field",
        "bianchi": "Bergmann-Bianchi identities of a declared lift",
        "jacobi": "Jacobi operator on gauge parameters",
        "conjugate": "conjugate points of the Jacobi equation about y = 0",
        "reductive": "reductive kernel/image split of an algebra operator",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("model", help="model file")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if name == "noether":
            p.add_argument("--field", required=True, help="vectorfield block name")
        if name == "bianchi":
            p.add_argument("--lift", help="lift block name")
        if name == "jacobi":
            p.add_argument("--lift", help="lift block name (default: identity lift)")
        if name == "conjugate":
            p.add_argument("--tmax", type=_positive_float, default=4.0, help="integration horizon")
            p.add_argument("--step", type=_positive_float, default=1e-3, help="RK4 step")
            p.add_argument("--table", action="store_true", help="also print the sampled trajectory")
            p.add_argument("--every", type=int, default=100, help="table sampling stride")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASS
    start = time.perf_counter()
    try:
        model = load_model(args.model)
        report = COMMANDS[args.command](model, args)
    except (JetvarError, ZeroDivisionError) as exc:
        _emit_error(args, exc)
        return EXIT_INPUT
    seconds = time.perf_counter() - start
    if args.json:
        print(json.dumps(report.to_dict(seconds), indent=2, sort_keys=True))
    else:
        for line in report.lines:
            print(line)
        status = "PASS" if report.passed else "FAIL"
        detail = ", ".join(f"{k}={_yn(v)}" for k, v in report.verdicts.items())
        print(f"{status}" + (f" ({detail})" if detail else ""))
    return EXIT_PASS if report.passed else EXIT_FAIL


def _emit_error(args, exc: Exception) -> None:
    if getattr(args, "json", False):
        print(json.dumps({"schema": SCHEMA, "command": args.command, "error": type(exc).__name__,
                          "message": str(exc)}, indent=2, sort_keys=True))
    print(f"error: {exc}", file=sys.stderr)


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
