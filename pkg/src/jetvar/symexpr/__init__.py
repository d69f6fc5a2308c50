from .coords import BASE, CONST, FIELD, PARAM, Coordinate
from .expr import (
    Expr,
    equals,
    eval_numeric,
    format_expr,
    lambdify,
    normalize,
    partial,
    substitute,
)
from .parser import parse, tokenize

__all__ = [
    "BASE",
    "CONST",
    "FIELD",
    "PARAM",
    "Coordinate",
    "Expr",
    "equals",
    "eval_numeric",
    "format_expr",
    "lambdify",
    "normalize",
    "parse",
    "partial",
    "substitute",
    "tokenize",
]
