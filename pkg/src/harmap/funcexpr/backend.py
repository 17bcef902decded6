"""Evaluation backend selection.

The environment variable HARMAP_BACKEND picks the jet-evaluation
kernel: "numba" (compiled, default when importable) or "numpy" (pure
vectorized fallback).  Unset or empty means: try numba, fall back to
numpy.  The choice is made once at import time.
"""
from __future__ import annotations

import os
import warnings


def _select():
    choice = os.environ.get("HARMAP_BACKEND", "").strip().lower()
    if choice not in ("", "numba", "numpy"):
        raise ValueError(
            f"HARMAP_BACKEND must be 'numba' or 'numpy', got {choice!r}")
    if choice == "numpy":
        from . import backend_numpy as mod
        return mod
    if choice == "numba":
        from . import backend_numba as mod
        return mod
    try:
        from . import backend_numba as mod
        return mod
    except ImportError:
        warnings.warn("numba unavailable, using the pure-numpy backend")
        from . import backend_numpy as mod
        return mod


_BACKEND = _select()


def backend_name() -> str:
    return _BACKEND.NAME


def eval_tape(tape, z0, order):
    return _BACKEND.eval_tape(tape, z0, order)


def warmup() -> None:
    """Trigger one throwaway evaluation so kernel compilation happens
    outside any timed section."""
    import numpy as np
    from .expr import Var
    from .tape import compile_expr
    eval_tape(compile_expr(Var()), np.array([0j]), 1)
