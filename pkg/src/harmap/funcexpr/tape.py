"""Flatten an expression tree into a linear instruction tape.

The tape is the unit both evaluation backends consume: arrays of
integer opcodes and operand slot indices plus a literal pool.  Each
instruction writes slot i (its own index); the value of the expression
is the last slot.  Common subtrees are merged so repeated factors cost
one evaluation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .expr import Const, Cos, Diff, Exp, HoloExpr, Log, Pow, Prod, Quot, Sin, Sum, Var

OP_Z = 0
OP_CONST = 1
OP_ADD = 2
OP_SUB = 3
OP_MUL = 4
OP_DIV = 5
OP_POW = 6
OP_EXP = 7
OP_SIN = 8
OP_COS = 9
OP_LOG = 10


@dataclass(frozen=True)
class Tape:
    ops: np.ndarray       # (n,) int64 opcodes
    arg_a: np.ndarray     # (n,) int64 first operand slot (or literal index)
    arg_b: np.ndarray     # (n,) int64 second operand slot (or integer exponent)
    literals: np.ndarray  # (m,) complex128 pool

    @property
    def n_slots(self) -> int:
        return int(self.ops.shape[0])


_BINOPS = {Sum: OP_ADD, Diff: OP_SUB, Prod: OP_MUL, Quot: OP_DIV}
_UNOPS = {Exp: OP_EXP, Sin: OP_SIN, Cos: OP_COS, Log: OP_LOG}


def compile_expr(node: HoloExpr) -> Tape:
    ops: list[tuple[int, int, int]] = []
    literals: list[complex] = []
    lit_index: dict[complex, int] = {}
    memo: dict[HoloExpr, int] = {}

    def emit(op, a=0, b=0) -> int:
        ops.append((op, a, b))
        return len(ops) - 1

    def visit(n: HoloExpr) -> int:
        slot = memo.get(n)
        if slot is not None:
            return slot
        if isinstance(n, Var):
            slot = emit(OP_Z)
        elif isinstance(n, Const):
            v = complex(n.value)
            li = lit_index.get(v)
            if li is None:
                li = len(literals)
                literals.append(v)
                lit_index[v] = li
            slot = emit(OP_CONST, li)
        elif type(n) in _BINOPS:
            a = visit(n.a)
            b = visit(n.b)
            slot = emit(_BINOPS[type(n)], a, b)
        elif isinstance(n, Pow):
            a = visit(n.base)
            slot = emit(OP_POW, a, n.exponent)
        elif type(n) in _UNOPS:
            a = visit(n.arg)
            slot = emit(_UNOPS[type(n)], a)
        else:
            raise TypeError(f"not an expression node: {n!r}")
        memo[n] = slot
        return slot

    visit(node)
    op_arr = np.array([o for o, _, _ in ops], dtype=np.int64)
    a_arr = np.array([a for _, a, _ in ops], dtype=np.int64)
    b_arr = np.array([b for _, _, b in ops], dtype=np.int64)
    lit_arr = np.array(literals if literals else [0j], dtype=np.complex128)
    return Tape(op_arr, a_arr, b_arr, lit_arr)
