"""Numba-compiled tape evaluator.

Same contract as backend_numpy.eval_tape, with the per-point recurrences
in one @njit kernel.  The kernel is tape-driven, so it compiles once per
process (disk-cached) regardless of how many expressions are evaluated.
"""
from __future__ import annotations

import cmath

import numpy as np
from numba import njit

from .tape import Tape

NAME = "numba"

_TINY = 1e-300


@njit(cache=True)
def _eval_kernel(ops, arg_a, arg_b, lits, z0, order, out, ok):  # pragma: no cover
    n_instr = ops.shape[0]
    npts = z0.shape[0]
    m = order + 1
    work = np.empty((n_instr, m), np.complex128)
    tmp = np.empty(m, np.complex128)
    tmp2 = np.empty(m, np.complex128)
    for p in range(npts):
        good = True
        for i in range(n_instr):
            op = ops[i]
            if op == 0:  # z
                work[i, 0] = z0[p]
                for k in range(1, m):
                    work[i, k] = 0.0
                if m > 1:
                    work[i, 1] = 1.0
            elif op == 1:  # const
                work[i, 0] = lits[arg_a[i]]
                for k in range(1, m):
                    work[i, k] = 0.0
            elif op == 2:  # add
                ia, ib = arg_a[i], arg_b[i]
                for k in range(m):
                    work[i, k] = work[ia, k] + work[ib, k]
            elif op == 3:  # sub
                ia, ib = arg_a[i], arg_b[i]
                for k in range(m):
                    work[i, k] = work[ia, k] - work[ib, k]
            elif op == 4:  # mul (Cauchy product)
                ia, ib = arg_a[i], arg_b[i]
                for k in range(m):
                    acc = work[ia, 0] * work[ib, k]
                    for j in range(1, k + 1):
                        acc = acc + work[ia, j] * work[ib, k - j]
                    tmp[k] = acc
                for k in range(m):
                    work[i, k] = tmp[k]
            elif op == 5:  # div
                ia, ib = arg_a[i], arg_b[i]
                b0 = work[ib, 0]
                if abs(b0) < _TINY:
                    good = False
                    break
                work[i, 0] = work[ia, 0] / b0
                for k in range(1, m):
                    acc = work[ia, k]
                    for j in range(1, k + 1):
                        acc = acc - work[ib, j] * work[i, k - j]
                    work[i, k] = acc / b0
            elif op == 6:  # integer power, repeated multiplication
                ia = arg_a[i]
                e = arg_b[i]
                work[i, 0] = 1.0
                for k in range(1, m):
                    work[i, k] = 0.0
                for _rep in range(e):
                    for k in range(m):
                        acc = work[i, 0] * work[ia, k]
                        for j in range(1, k + 1):
                            acc = acc + work[i, j] * work[ia, k - j]
                        tmp[k] = acc
                    for k in range(m):
                        work[i, k] = tmp[k]
            elif op == 7:  # exp
                ia = arg_a[i]
                work[i, 0] = cmath.exp(work[ia, 0])
                for k in range(1, m):
                    acc = work[ia, 1] * work[i, k - 1]
                    for j in range(2, k + 1):
                        acc = acc + j * work[ia, j] * work[i, k - j]
                    work[i, k] = acc / k
            elif op == 8 or op == 9:  # sin / cos, computed jointly
                ia = arg_a[i]
                tmp[0] = cmath.sin(work[ia, 0])
                tmp2[0] = cmath.cos(work[ia, 0])
                for k in range(1, m):
                    acc_s = work[ia, 1] * tmp2[k - 1]
                    acc_c = work[ia, 1] * tmp[k - 1]
                    for j in range(2, k + 1):
                        acc_s = acc_s + j * work[ia, j] * tmp2[k - j]
                        acc_c = acc_c + j * work[ia, j] * tmp[k - j]
                    tmp[k] = acc_s / k
                    tmp2[k] = -acc_c / k
                if op == 8:
                    for k in range(m):
                        work[i, k] = tmp[k]
                else:
                    for k in range(m):
                        work[i, k] = tmp2[k]
            else:  # log
                ia = arg_a[i]
                a0 = work[ia, 0]
                if abs(a0) < _TINY:
                    good = False
                    break
                work[i, 0] = cmath.log(a0)
                for k in range(1, m):
                    acc = work[ia, k] * k
                    for j in range(1, k):
                        acc = acc - j * work[i, j] * work[ia, k - j]
                    work[i, k] = acc / (k * a0)
        if good:
            ok[p] = True
            for k in range(m):
                out[k, p] = work[n_instr - 1, k]
        else:
            ok[p] = False
            for k in range(m):
                out[k, p] = complex(np.nan, np.nan)


def eval_tape(tape: Tape, z0: np.ndarray, order: int):
    """Numba twin of backend_numpy.eval_tape, identical contract."""
    n = z0.shape[0]
    out = np.empty((order + 1, n), dtype=np.complex128)
    ok = np.empty(n, dtype=np.bool_)
    _eval_kernel(tape.ops, tape.arg_a, tape.arg_b, tape.literals,
                 np.ascontiguousarray(z0, dtype=np.complex128),
                 order, out, ok)
    return out, ok


def warmup():
    """Force kernel compilation (or cache load) with a trivial tape."""
    from .tape import compile_expr
    from .expr import Var
    eval_tape(compile_expr(Var()), np.array([0j]), 1)
