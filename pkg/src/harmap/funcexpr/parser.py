"""Recursive-descent parser for the expression DSL.

Grammar (whitespace insignificant, no implicit multiplication):

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := unary ("^" nonneg_integer)?
    unary  := "-"? base
    base   := "z" | "i" | number | "(" expr ")" | func "(" expr ")"
    func   := "exp" | "sin" | "cos" | "log"

A unary minus in front of a number literal folds into a negative
constant; in front of anything else it desugars to (-1.0)*base, so the
AST needs no negation node.
"""
from __future__ import annotations

import re

from ..errors import ExprSyntaxError, NegativeExponentError, UnknownIdentifierError
from .expr import Const, Cos, Diff, Exp, HoloExpr, Log, Pow, Prod, Quot, Sin, Sum, Var

_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)

_FUNCS = {"exp": Exp, "sin": Sin, "cos": Cos, "log": Log}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == m.start():
            # skip leading spaces before reporting
            at = pos + len(text[pos:]) - len(text[pos:].lstrip())
            if at >= n:
                break
            raise ExprSyntaxError(f"unexpected character {text[at]!r}", at)
        pos = m.end()
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.idx = 0

    def peek(self):
        if self.idx < len(self.tokens):
            return self.tokens[self.idx]
        return None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise ExprSyntaxError("unexpected end of input", len(self.text))
        self.idx += 1
        return tok

    def accept_op(self, *symbols):
        tok = self.peek()
        if tok is not None and tok[0] == "op" and tok[1] in symbols:
            self.idx += 1
            return tok[1]
        return None

    def expect_op(self, symbol):
        tok = self.peek()
        if tok is None:
            raise ExprSyntaxError(f"expected {symbol!r}", len(self.text))
        if tok[0] != "op" or tok[1] != symbol:
            raise ExprSyntaxError(f"expected {symbol!r}, found {tok[1]!r}", tok[2])
        self.idx += 1

    def parse(self) -> HoloExpr:
        node = self.expr()
        tok = self.peek()
        if tok is not None:
            raise ExprSyntaxError(f"unexpected token {tok[1]!r}", tok[2])
        return node

    def expr(self) -> HoloExpr:
        node = self.term()
        while True:
            op = self.accept_op("+", "-")
            if op is None:
                return node
            rhs = self.term()
            node = Sum(node, rhs) if op == "+" else Diff(node, rhs)

    def term(self) -> HoloExpr:
        node = self.factor()
        while True:
            op = self.accept_op("*", "/")
            if op is None:
                return node
            rhs = self.factor()
            node = Prod(node, rhs) if op == "*" else Quot(node, rhs)

    def factor(self) -> HoloExpr:
        node = self.unary()
        if self.accept_op("^"):
            node = Pow(node, self.exponent())
        return node

    def exponent(self) -> int:
        tok = self.peek()
        if tok is None:
            raise ExprSyntaxError("expected exponent", len(self.text))
        kind, value, at = tok
        if kind == "op" and value == "-":
            raise NegativeExponentError("negative integer exponent", at)
        if kind != "number":
            raise ExprSyntaxError("exponent must be a non-negative integer", at)
        if not value.isdigit():
            raise ExprSyntaxError("exponent must be a non-negative integer", at)
        self.idx += 1
        return int(value)

    def unary(self) -> HoloExpr:
        if self.accept_op("-"):
            node = self.base()
            if isinstance(node, Const):
                return Const(-node.value)
            return Prod(Const(-1.0), node)
        return self.base()

    def base(self) -> HoloExpr:
        kind, value, at = self.next()
        if kind == "number":
            return Const(float(value))
        if kind == "ident":
            if value == "z":
                return Var()
            if value == "i":
                return Const(1j)
            if value in _FUNCS:
                self.expect_op("(")
                inner = self.expr()
                self.expect_op(")")
                return _FUNCS[value](inner)
            raise UnknownIdentifierError(f"unknown identifier {value!r}", at)
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ExprSyntaxError(f"unexpected token {value!r}", at)


def parse_expr(text: str) -> HoloExpr:
    """Parse DSL text into an expression tree.

    Raises ExprSyntaxError (with .position) on malformed input,
    UnknownIdentifierError for identifiers outside the grammar, and
    NegativeExponentError for powers like z^-1.
    """
    return _Parser(text).parse()
