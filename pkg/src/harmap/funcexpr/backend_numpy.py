"""Pure-numpy tape evaluator.

Evaluates truncated Taylor expansions (jets) of a compiled expression
at an array of base points.  Works on (order+1, npoints) coefficient
blocks per tape slot; the convolution loops run over the (small) jet
order, so everything point-wise is vectorized.
"""
from __future__ import annotations

import numpy as np

from .tape import (OP_ADD, OP_CONST, OP_COS, OP_DIV, OP_EXP, OP_LOG, OP_MUL,
                   OP_POW, OP_SIN, OP_SUB, OP_Z, Tape)

NAME = "numpy"

_TINY = 1e-300


def _cauchy(a, b, m):
    out = np.empty_like(a)
    for k in range(m):
        acc = a[0] * b[k]
        for j in range(1, k + 1):
            acc = acc + a[j] * b[k - j]
        out[k] = acc
    return out


def eval_tape(tape: Tape, z0: np.ndarray, order: int):
    """Return (coeffs, ok): coeffs[(order+1, n)] Taylor coefficients of the
    expression at each z0, ok[n] False where a quotient/log singularity
    was hit (those columns are NaN)."""
    ops, arg_a, arg_b, lits = tape.ops, tape.arg_a, tape.arg_b, tape.literals
    n = z0.shape[0]
    m = order + 1
    work = np.zeros((tape.n_slots, m, n), dtype=np.complex128)
    ok = np.ones(n, dtype=np.bool_)
    with np.errstate(all="ignore"):
        for i in range(tape.n_slots):
            op = ops[i]
            if op == OP_Z:
                work[i, 0] = z0
                if m > 1:
                    work[i, 1] = 1.0
            elif op == OP_CONST:
                work[i, 0] = lits[arg_a[i]]
            elif op == OP_ADD:
                np.add(work[arg_a[i]], work[arg_b[i]], out=work[i])
            elif op == OP_SUB:
                np.subtract(work[arg_a[i]], work[arg_b[i]], out=work[i])
            elif op == OP_MUL:
                work[i] = _cauchy(work[arg_a[i]], work[arg_b[i]], m)
            elif op == OP_DIV:
                a, b = work[arg_a[i]], work[arg_b[i]]
                bad = np.abs(b[0]) < _TINY
                ok &= ~bad
                b0 = np.where(bad, 1.0, b[0])
                q = work[i]
                q[0] = a[0] / b0
                for k in range(1, m):
                    acc = a[k]
                    for j in range(1, k + 1):
                        acc = acc - b[j] * q[k - j]
                    q[k] = acc / b0
                q[:, bad] = np.nan
            elif op == OP_POW:
                a = work[arg_a[i]]
                e = int(arg_b[i])
                r = work[i]
                r[:] = 0.0
                r[0] = 1.0
                for _ in range(e):
                    r[:] = _cauchy(r, a, m)
            elif op == OP_EXP:
                a = work[arg_a[i]]
                r = work[i]
                r[0] = np.exp(a[0])
                for k in range(1, m):
                    acc = a[1] * r[k - 1]
                    for j in range(2, k + 1):
                        acc = acc + j * a[j] * r[k - j]
                    r[k] = acc / k
            elif op == OP_SIN or op == OP_COS:
                a = work[arg_a[i]]
                s = np.empty((m, n), dtype=np.complex128)
                c = np.empty((m, n), dtype=np.complex128)
                s[0] = np.sin(a[0])
                c[0] = np.cos(a[0])
                for k in range(1, m):
                    acc_s = a[1] * c[k - 1]
                    acc_c = a[1] * s[k - 1]
                    for j in range(2, k + 1):
                        acc_s = acc_s + j * a[j] * c[k - j]
                        acc_c = acc_c + j * a[j] * s[k - j]
                    s[k] = acc_s / k
                    c[k] = -acc_c / k
                work[i] = s if op == OP_SIN else c
            elif op == OP_LOG:
                a = work[arg_a[i]]
                bad = np.abs(a[0]) < _TINY
                ok &= ~bad
                a0 = np.where(bad, 1.0, a[0])
                r = work[i]
                r[0] = np.log(a0)
                for k in range(1, m):
                    acc = a[k] * k
                    for j in range(1, k):
                        acc = acc - j * r[j] * a[k - j]
                    r[k] = acc / (k * a0)
                r[:, bad] = np.nan
            else:
                raise ValueError(f"bad opcode {op}")
    out = work[-1].copy()
    if not ok.all():
        out[:, ~ok] = np.nan
    return out, ok
