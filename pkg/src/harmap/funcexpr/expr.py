"""Expression AST for holomorphic functions of one complex variable.

Nodes are immutable; structural equality is dataclass equality.  The
printer emits text that re-parses to a structurally identical tree for
every tree the parser can produce (general complex literals, which only
arise programmatically, print as a grammar-conformant sum instead).
"""
from __future__ import annotations

from dataclasses import dataclass


class HoloExpr:
    """Base class for AST nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Var(HoloExpr):
    """The variable z."""


@dataclass(frozen=True)
class Const(HoloExpr):
    value: complex


@dataclass(frozen=True)
class Sum(HoloExpr):
    a: HoloExpr
    b: HoloExpr


@dataclass(frozen=True)
class Diff(HoloExpr):
    a: HoloExpr
    b: HoloExpr


@dataclass(frozen=True)
class Prod(HoloExpr):
    a: HoloExpr
    b: HoloExpr


@dataclass(frozen=True)
class Quot(HoloExpr):
    a: HoloExpr
    b: HoloExpr


@dataclass(frozen=True)
class Pow(HoloExpr):
    base: HoloExpr
    exponent: int

    def __post_init__(self):
        if self.exponent < 0:
            raise ValueError("integer power requires a non-negative exponent")


@dataclass(frozen=True)
class Exp(HoloExpr):
    arg: HoloExpr


@dataclass(frozen=True)
class Sin(HoloExpr):
    arg: HoloExpr


@dataclass(frozen=True)
class Cos(HoloExpr):
    arg: HoloExpr


@dataclass(frozen=True)
class Log(HoloExpr):
    arg: HoloExpr


_FUNC_NAMES = {Exp: "exp", Sin: "sin", Cos: "cos", Log: "log"}

# Printer precedence levels: additive < multiplicative < power < atom.
_PREC_ADD = 1
_PREC_MUL = 2
_PREC_POW = 3
_PREC_ATOM = 4


def _fmt_real(x: float) -> str:
    # repr() is the shortest string that round-trips a double
    return repr(float(x))


def _const_source(value: complex) -> tuple[str, int]:
    re, im = value.real, value.imag
    if im == 0.0:
        text = _fmt_real(re)
        return text, _PREC_ATOM
    if re == 0.0:
        if im == 1.0:
            return "i", _PREC_ATOM
        if im == -1.0:
            return "-i", _PREC_ATOM
        return f"{_fmt_real(im)}*i", _PREC_MUL
    # General complex literals cannot appear from the parser; print a
    # sum that evaluates to the same value.
    if im > 0:
        return f"({_fmt_real(re)}+{_fmt_real(im)}*i)", _PREC_ATOM
    return f"({_fmt_real(re)}-{_fmt_real(-im)}*i)", _PREC_ATOM


def _render(node: HoloExpr) -> tuple[str, int]:
    if isinstance(node, Var):
        return "z", _PREC_ATOM
    if isinstance(node, Const):
        return _const_source(node.value)
    if isinstance(node, (Sum, Diff)):
        op = "+" if isinstance(node, Sum) else "-"
        left = _child(node.a, _PREC_ADD)
        right = _child(node.b, _PREC_ADD + (0 if isinstance(node, Sum) else 1))
        return f"{left}{op}{right}", _PREC_ADD
    if isinstance(node, (Prod, Quot)):
        op = "*" if isinstance(node, Prod) else "/"
        left = _child(node.a, _PREC_MUL)
        right = _child(node.b, _PREC_MUL + 1)
        return f"{left}{op}{right}", _PREC_MUL
    if isinstance(node, Pow):
        base_text, base_prec = _render(node.base)
        # only one '^' per factor in the grammar, so a Pow base needs parens
        if base_prec < _PREC_ATOM or isinstance(node.base, Pow):
            base_text = f"({base_text})"
        return f"{base_text}^{node.exponent}", _PREC_POW
    if isinstance(node, (Exp, Sin, Cos, Log)):
        inner, _ = _render(node.arg)
        return f"{_FUNC_NAMES[type(node)]}({inner})", _PREC_ATOM
    raise TypeError(f"not an expression node: {node!r}")


def _child(node: HoloExpr, min_prec: int) -> str:
    text, prec = _render(node)
    if prec < min_prec:
        return f"({text})"
    # "a+-2.0" style output stays verbatim so the reparse is structural;
    # a leading '-' only matters when it would fuse with a '^'
    return text


def to_source(node: HoloExpr) -> str:
    """Render the tree as DSL text."""
    return _render(node)[0]


def substitute(node: HoloExpr, replacement: HoloExpr) -> HoloExpr:
    """Return the tree with every occurrence of the variable replaced."""
    if isinstance(node, Var):
        return replacement
    if isinstance(node, Const):
        return node
    if isinstance(node, (Sum, Diff, Prod, Quot)):
        return type(node)(substitute(node.a, replacement),
                          substitute(node.b, replacement))
    if isinstance(node, Pow):
        return Pow(substitute(node.base, replacement), node.exponent)
    if isinstance(node, (Exp, Sin, Cos, Log)):
        return type(node)(substitute(node.arg, replacement))
    raise TypeError(f"not an expression node: {node!r}")
