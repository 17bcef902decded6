#!/usr/bin/env python3
"""Benchmark the numba jet kernel against the pure-numpy fallback.

Times tape evaluation (the hot path under every grid sweep, Newton
solve, and bisection in the package) for representative expressions at
several jet orders and point counts, then one end-to-end sup sweep.

Run:  python3 benchmarks/bench_backends.py [--points N] [--repeats R]

Backend selection is import-time, so both backends are loaded here
directly rather than through HARMAP_BACKEND.
"""
import argparse
import time

import numpy as np

from harmap.funcexpr import parse_expr
from harmap.funcexpr.tape import compile_expr
from harmap.funcexpr import backend_numba, backend_numpy

EXPRS = {
    "shear": "z^2/2",
    "mobius": "(z+0.5)/(1+0.5*z)",
    "cusp": "exp(i/(1-z))",
    "mixed": "sin(z)*exp(z^2)/(2-z) + log(2+z)",
}


def time_fn(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=200_000)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    r = 0.9 * np.sqrt(rng.random(args.points))
    theta = 2 * np.pi * rng.random(args.points)
    zs = (r * np.exp(1j * theta)).astype(np.complex128)

    backend_numba.warmup()

    print(f"{args.points} points, best of {args.repeats} runs")
    print(f"{'expr':8s} {'order':>5s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    for name, text in EXPRS.items():
        tape = compile_expr(parse_expr(text))
        for order in (0, 1, 3, 6):
            backend_numba.eval_tape(tape, zs[:10], order)  # ensure compiled
            t_np = time_fn(lambda: backend_numpy.eval_tape(tape, zs, order),
                           args.repeats)
            t_nb = time_fn(lambda: backend_numba.eval_tape(tape, zs, order),
                           args.repeats)
            a, _ = backend_numpy.eval_tape(tape, zs[:100], order)
            b, _ = backend_numba.eval_tape(tape, zs[:100], order)
            assert np.allclose(a, b, rtol=1e-12, atol=1e-12, equal_nan=True)
            print(f"{name:8s} {order:5d} {t_np*1e3:9.2f}ms {t_nb*1e3:9.2f}ms "
                  f"{t_np/t_nb:7.1f}x")

    # end-to-end: one boundary sweep on the blow-up map
    import os
    from harmap import HarmonicMap
    from harmap import normality
    f = HarmonicMap.from_text("exp(i/(1-z))")
    t0 = time.perf_counter()
    est = normality.estimate_sup_normality(f, 0.999, 128, 3)
    dt = time.perf_counter() - t0
    active = os.environ.get("HARMAP_BACKEND", "") or "auto"
    print(f"\nsup sweep (grid=128, backend={active}): value={est.value:.1f} "
          f"in {dt*1e3:.1f}ms")


if __name__ == "__main__":
    main()
