"""Recursive-descent parser for the expression grammar.

Grammar (whitespace is insignificant)::

    expr     = term { ("+" | "-") term } ;
    term     = unary { ("*" | "/") unary } ;
    unary    = ("+" | "-") unary | power ;
    power    = atom [ ("^" | "**") exponent ] ;
    exponent = ["-" | "+"] integer | "(" ["-" | "+"] integer ")" ;
    atom     = number | identifier | "(" expr ")" ;
    number   = digit { digit } [ "." digit { digit } ] ;
    identifier = letter { letter | digit } [ "_" letter { letter } ] ;

An identifier with a subscript (``y_xt``) names a jet coordinate of a field
or parameter; each subscript letter is a base coordinate and the order of the
letters does not matter.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import TYPE_CHECKING, List, Tuple

from ..errors import OrderOverflowError, ParseError, UndeclaredError
from .expr import Expr

if TYPE_CHECKING:
    from ..jetspace.space import JetSpace

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>\d+(?:\.\d+)?)"
    r"|(?P<ident>[A-Za-z][A-Za-z0-9]*(?:_[A-Za-z]+)?)"
    r"|(?P<op>\*\*|[-+*/^()])"
    r")"
)

Token = Tuple[str, str, int]


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, space: "JetSpace"):
        self.text = text
        self.space = space
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def take(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        kind, v, pos = self.take()
        if v != value or kind == "end":
            what = "end of input" if kind == "end" else repr(v)
            raise ParseError(f"expected {value!r}, found {what}", pos, self.text)

    def fail(self, message: str, pos: int):
        raise ParseError(message, pos, self.text)

    def parse(self) -> Expr:
        if self.peek()[0] == "end":
            self.fail("empty expression", 0)
        e = self.expr()
        kind, v, pos = self.peek()
        if kind != "end":
            self.fail(f"unexpected token {v!r}", pos)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                e = e * rhs
            else:
                if rhs.is_zero:
                    self.fail("division by zero", pos)
                e = e / rhs
        return e

    def unary(self) -> Expr:
        kind, v, _ = self.peek()
        if kind == "op" and v in ("+", "-"):
            self.take()
            e = self.unary()
            return -e if v == "-" else e
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, v, pos = self.peek()
        if kind == "op" and v in ("^", "**"):
            self.take()
            k = self.exponent()
            if k < 0 and base.is_zero:
                self.fail("zero raised to a negative power", pos)
            return base ** k
        return base

    def exponent(self) -> int:
        paren = False
        if self.peek()[1] == "(" and self.peek()[0] == "op":
            self.take()
            paren = True
        sign = 1
        if self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        kind, v, pos = self.take()
        if kind != "num" or "." in v:
            self.fail("exponent must be an integer", pos)
        if paren:
            self.expect(")")
        return sign * int(v)

    def atom(self) -> Expr:
        kind, v, pos = self.take()
        if kind == "num":
            return Expr.constant(self.space, Fraction(v))
        if kind == "ident":
            try:
                c = self.space.lookup(v)
            except UndeclaredError as exc:
                raise UndeclaredError(f"{exc} (at position {pos})") from None
            except OrderOverflowError as exc:
                raise OrderOverflowError(f"{exc} (at position {pos})") from None
            return Expr.coordinate(self.space, c)
        if kind == "op" and v == "(":
            e = self.expr()
            self.expect(")")
            return e
        what = "end of input" if kind == "end" else repr(v)
        self.fail(f"unexpected {what}", pos)


def parse(text: str, space: "JetSpace") -> Expr:
    """Parse ``text`` into a canonical :class:`Expr` over ``space``."""
    return _Parser(text, space).parse()
