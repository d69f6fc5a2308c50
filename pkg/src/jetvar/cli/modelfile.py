"""Line-oriented model files.

A model is a sequence of named blocks, each closed by ``end``.  Blank lines
and ``#`` comments are ignored.  See ``docs/model-format.md`` for the full
grammar and worked examples.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from ..errors import JetvarError, ModelFileError
from ..jetspace.space import JetSpace, order_cap
from ..jetspace.vectorfield import ProjectableVectorField
from ..reductive import AlgebraOperator, LieAlgebra
from ..symexpr.expr import Expr
from ..variational.lagrangian import Lagrangian
from ..variational.noether import GaugeLift

_NAME = re.compile(r"[A-Za-z][A-Za-z0-9]*$")
_BLOCK_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*$")
BLOCKS = ("space", "lagrangian", "euler", "vectorfield", "lift", "algebra")


@dataclass
class Block:
    kind: str
    name: Optional[str]
    line: int
    body: List[Tuple[int, str]] = field(default_factory=list)


@dataclass
class AlgebraSpec:
    algebra: LieAlgebra
    operator: Optional[AlgebraOperator]
    kernel: Optional[List[List[Fraction]]] = None
    image: Optional[List[List[Fraction]]] = None


@dataclass
class Model:
    text: str
    source: str = "<string>"
    space: Optional[JetSpace] = None
    constant_values: Dict[str, Fraction] = field(default_factory=dict)
    lagrangian: Optional[Lagrangian] = None
    lagrangian_text: Optional[str] = None
    euler: Optional[List[Expr]] = None
    vectorfields: Dict[str, ProjectableVectorField] = field(default_factory=dict)
    lifts: Dict[str, GaugeLift] = field(default_factory=dict)
    algebra: Optional[AlgebraSpec] = None

    @property
    def sha256(self) -> str:
        return hashlib.sha256(self.text.encode("utf-8")).hexdigest()


def _split_blocks(text: str) -> List[Block]:
    blocks: List[Block] = []
    current: Optional[Block] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if current is None:
            head = line.split()
            if head[0] not in BLOCKS:
                raise ModelFileError(f"expected a block header ({', '.join(BLOCKS)}), got {head[0]!r}", lineno)
            if len(head) > 2:
                raise ModelFileError("a block header takes at most one name", lineno)
            name = head[1] if len(head) == 2 else None
            if name is not None and not _BLOCK_NAME.match(name):
                raise ModelFileError(f"invalid block name {name!r}", lineno)
            if head[0] in ("vectorfield", "lift") and name is None:
                raise ModelFileError(f"a {head[0]} block needs a name", lineno)
            current = Block(head[0], name, lineno)
        elif line == "end":
            blocks.append(current)
            current = None
        else:
            current.body.append((lineno, line))
    if current is not None:
        raise ModelFileError(f"block {current.kind!r} opened here is never closed with 'end'", current.line)
    return blocks


def _keyword(line: str) -> Tuple[str, str]:
    parts = line.split(None, 1)
    return parts[0], parts[1] if len(parts) > 1 else ""


def _rational(text: str, lineno: int) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ModelFileError(f"expected a rational number, got {text.strip()!r}", lineno) from None


def _names(text: str, lineno: int, what: str) -> List[str]:
    names = text.replace(",", " ").split()
    for n in names:
        if not _NAME.match(n):
            raise ModelFileError(f"invalid {what} name {n!r}", lineno)
    return names


def _parse_space(block: Block, model: Model) -> None:
    base: List[str] = []
    fields: List[str] = []
    params: List[str] = []
    constants: Dict[str, Fraction] = {}
    order: Optional[int] = None
    metric = None
    for lineno, line in block.body:
        key, rest = _keyword(line)
        if key == "base":
            base = _names(rest, lineno, "base coordinate")
        elif key == "fields":
            fields = _names(rest, lineno, "field")
        elif key == "params":
            params = _names(rest, lineno, "parameter")
        elif key == "constants":
            for item in rest.replace(",", " ").split():
                name, _, value = item.partition("=")
                if not _NAME.match(name):
                    raise ModelFileError(f"invalid constant name {name!r}", lineno)
                constants[name] = _rational(value, lineno) if value else Fraction(1)
        elif key == "order":
            try:
                order = int(rest)
            except ValueError:
                raise ModelFileError(f"order must be an integer, got {rest!r}", lineno) from None
        elif key == "metric":
            metric = [[_rational(x, lineno) for x in row.split()] for row in rest.split(";")]
        else:
            raise ModelFileError(f"unknown space entry {key!r}", lineno)
    if not base or not fields:
        raise ModelFileError("the space block needs 'base' and 'fields'", block.line)
    try:
        model.space = JetSpace(base, fields, params=params, order=order_cap() if order is None else order,
                               constants=list(constants), metric=metric)
    except JetvarError as exc:
        raise ModelFileError(str(exc), block.line) from exc
    model.constant_values = constants


def _parse_expr(model: Model, text: str, lineno: int) -> Expr:
    try:
        return model.space.parse(text)
    except JetvarError as exc:
        raise ModelFileError(str(exc), lineno) from exc


def _component_lines(block: Block, model: Model, allowed: Dict[str, List[str]]) -> Dict[str, Dict[str, Expr]]:
    """Parse ``<prefix> <name>: expr`` or ``<name>: expr`` lines into per-prefix tables."""
    out: Dict[str, Dict[str, Expr]] = {k: {} for k in allowed}
    for lineno, line in block.body:
        head, sep, expr = line.partition(":")
        if not sep:
            raise ModelFileError(f"expected 'name: expression', got {line!r}", lineno)
        words = head.split()
        prefix = words[0] if len(words) == 2 else ""
        target = words[-1] if words else ""
        if prefix not in allowed or len(words) not in (1, 2):
            raise ModelFileError(f"unexpected entry {head.strip()!r}", lineno)
        if target not in allowed[prefix]:
            raise ModelFileError(f"{target!r} is not one of {', '.join(allowed[prefix])}", lineno)
        if target in out[prefix]:
            raise ModelFileError(f"duplicate entry for {target!r}", lineno)
        out[prefix][target] = _parse_expr(model, expr.strip(), lineno)
    return out


def parse_model(text: str, source: str = "<string>") -> Model:
    model = Model(text, source)
    blocks = _split_blocks(text)
    spaces = [b for b in blocks if b.kind == "space"]
    if len(spaces) > 1:
        raise ModelFileError("only one space block is allowed", spaces[1].line)
    for kind in ("lagrangian", "euler", "algebra"):
        dup = [b for b in blocks if b.kind == kind]
        if len(dup) > 1:
            raise ModelFileError(f"only one {kind} block is allowed", dup[1].line)
    if spaces:
        _parse_space(spaces[0], model)
    for block in blocks:
        if block.kind in ("lagrangian", "euler", "vectorfield", "lift") and model.space is None:
            raise ModelFileError(f"a {block.kind} block needs a space block", block.line)
        if block.kind == "lagrangian":
            if not block.body:
                raise ModelFileError("empty lagrangian block", block.line)
            text_ = " ".join(line for _, line in block.body)
            expr = _parse_expr(model, text_, block.body[0][0])
            try:
                model.lagrangian = Lagrangian(expr)
            except JetvarError as exc:
                raise ModelFileError(str(exc), block.line) from exc
            model.lagrangian_text = text_
        elif block.kind == "euler":
            table = _component_lines(block, model, {"": model.space.field_names})[""]
            model.euler = [table.get(f, model.space.zero()) for f in model.space.field_names]
        elif block.kind == "vectorfield":
            if block.name in model.vectorfields:
                raise ModelFileError(f"duplicate vectorfield {block.name!r}", block.line)
            t = _component_lines(block, model, {"xi": model.space.base_names, "Xi": model.space.field_names})
            sp = model.space
            try:
                model.vectorfields[block.name] = ProjectableVectorField(
                    sp, [t["xi"].get(b, sp.zero()) for b in sp.base_names],
                    [t["Xi"].get(f, sp.zero()) for f in sp.field_names])
            except JetvarError as exc:
                raise ModelFileError(str(exc), block.line) from exc
        elif block.kind == "lift":
            _parse_lift(block, model)
        elif block.kind == "algebra":
            model.algebra = _parse_algebra(block)
    return model


def _parse_lift(block: Block, model: Model) -> None:
    if block.name in model.lifts:
        raise ModelFileError(f"duplicate lift {block.name!r}", block.line)
    sp = model.space
    params = None
    body = []
    for lineno, line in block.body:
        key, rest = _keyword(line)
        if key == "params" and ":" not in line:
            params = _names(rest, lineno, "parameter")
            unknown = [p for p in params if p not in sp.param_names]
            if unknown:
                raise ModelFileError(f"undeclared lift parameters: {', '.join(unknown)}", lineno)
        else:
            body.append((lineno, line))
    table = _component_lines(Block("lift", block.name, block.line, body), model, {"": sp.field_names})[""]
    variations = [table.get(f, sp.zero()) for f in sp.field_names]
    try:
        model.lifts[block.name] = GaugeLift.from_variations(sp, variations, params, block.name)
    except JetvarError as exc:
        raise ModelFileError(str(exc), block.line) from exc


def _parse_algebra(block: Block) -> AlgebraSpec:
    dim = None
    triples = []
    rows: List[List[Fraction]] = []
    inner: List[List[Fraction]] = []
    killing = False
    kernel: List[List[Fraction]] = []
    image: List[List[Fraction]] = []
    for lineno, line in block.body:
        key, rest = _keyword(line)
        vals = rest.split()
        if key == "dim":
            try:
                dim = int(rest)
            except ValueError:
                raise ModelFileError(f"dim must be an integer, got {rest!r}", lineno) from None
        elif key == "bracket":
            if len(vals) != 4:
                raise ModelFileError("bracket needs 'i j k value'", lineno)
            try:
                i, j, k = (int(x) for x in vals[:3])
            except ValueError:
                raise ModelFileError("bracket indices must be integers", lineno) from None
            triples.append((i, j, k, _rational(vals[3], lineno), lineno))
        elif key == "row":
            rows.append([_rational(x, lineno) for x in vals])
        elif key == "inner":
            inner.append([_rational(x, lineno) for x in vals])
        elif key == "killing":
            killing = True
        elif key in ("k", "kernel"):
            kernel.append([_rational(x, lineno) for x in vals])
        elif key in ("m", "image"):
            image.append([_rational(x, lineno) for x in vals])
        else:
            raise ModelFileError(f"unknown algebra entry {key!r}", lineno)
    if dim is None or dim < 1:
        raise ModelFileError("the algebra block needs a positive 'dim'", block.line)
    for i, j, k, _, lineno in triples:
        if not all(1 <= x <= dim for x in (i, j, k)):
            raise ModelFileError(f"bracket index out of range 1..{dim}", lineno)
    for what, mat in (("row", rows), ("inner", inner), ("kernel/image", kernel + image)):
        if any(len(r) != dim for r in mat):
            raise ModelFileError(f"every {what} line needs {dim} entries", block.line)
    if rows and len(rows) != dim:
        raise ModelFileError(f"operator needs {dim} rows, got {len(rows)}", block.line)
    if inner and len(inner) != dim:
        raise ModelFileError(f"inner product needs {dim} rows, got {len(inner)}", block.line)
    if inner and killing:
        raise ModelFileError("give either an inner product or 'killing', not both", block.line)
    try:
        A = LieAlgebra.from_triples(dim, [t[:4] for t in triples], inner or None, one_based=True)
        if killing:
            A = A.with_killing_form()
    except JetvarError as exc:
        raise ModelFileError(f"invalid algebra: {exc}", block.line) from exc
    return AlgebraSpec(A, AlgebraOperator(rows) if rows else None,
                       kernel if (kernel or image) else None, image if (kernel or image) else None)


def load_model(path: str | Path) -> Model:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelFileError(f"cannot read {p}: {exc.strerror or exc}") from exc
    return parse_model(text, str(p))
