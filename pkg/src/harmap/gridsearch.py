"""Polar-grid sweeps with local refinement and trend classification.

One engine serves every boundary functional in the package: sup/inf
estimation for the normality functionals and the grid stage of the
rescaling solver.  Determinism contract: the coarse sweep breaks ties
by smaller radius then smaller angle (row-major argmax), refinement
moves only on strict improvement, so repeated runs give bit-identical
results.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError

TREND_FLAT = "flat"
TREND_GROWING = "growing"
TREND_INCONCLUSIVE = "inconclusive"

_SLOPE_THRESHOLD = 0.2


def polar_radii(r_max: float, grid: int) -> np.ndarray:
    """grid+1 radii on [0, r_max], quadratically clustered toward r_max.

    Doubling `grid` yields a superset of the radii, which keeps grid
    sweeps monotone under resolution doubling.
    """
    u = np.arange(grid + 1) / grid
    return r_max * (1.0 - (1.0 - u) ** 2)


def polar_angles(grid: int) -> np.ndarray:
    n = 2 * grid
    return 2.0 * np.pi * np.arange(n) / n


@dataclass
class SweepResult:
    value: float
    argmax: complex
    trend: list          # (radius, extreme over the circle) pairs
    skips: int           # grid nodes that evaluated singular/non-finite
    n_evaluated: int
    refined: bool


def sweep_polar(values_fn, r_max: float, grid: int, refine_iters: int,
    mode: str = "max") -> SweepResult:
    """Extremize values_fn over the closed disk |z| <= r_max.

    values_fn maps a complex ndarray to a float ndarray; NaN entries
    count as skipped nodes.  refine_iters rounds of 9-point local grids
    shrink spacing by 4 around the running extremum.
    """
    if not 0 < r_max < 1:
        raise ValueError("r_max must lie in (0, 1)")
    if grid < 16:
        raise ValueError("grid must be >= 16")
    sign = 1.0 if mode == "max" else -1.0

    radii = polar_radii(r_max, grid)
    angles = polar_angles(grid)
    zs = radii[:, None] * np.exp(1j * angles)[None, :]
    values = sign * np.asarray(values_fn(zs.ravel()), dtype=np.float64)
    values = values.reshape(zs.shape)
    finite = np.isfinite(values)
    skips = int((~finite).sum())
    if not finite.any():
        raise NumericalError("all grid points evaluated singular")

    with np.errstate(all="ignore"):
        circle_best = np.where(finite.any(axis=1),
                               np.nanmax(np.where(finite, values, -np.inf), axis=1),
                               np.nan)
    trend = [(float(r), sign * float(v))
             for r, v in zip(radii, circle_best) if np.isfinite(v)]

    flat_idx = int(np.nanargmax(np.where(finite, values, -np.inf)))
    j, m = divmod(flat_idx, len(angles))
    best_value = float(values[j, m])
    best_r = float(radii[j])
    best_theta = float(angles[m])

    # local refinement: 3x3 neighborhoods shrinking by 4 per round
    n_evaluated = zs.size
    if refine_iters > 0:
        dr = radii[min(j + 1, grid)] - radii[max(j - 1, 0)]
        dr = max(dr / 2.0, 1e-15)
        dtheta = math.pi / grid
        for _ in range(refine_iters):
            rr = np.clip(np.array([best_r - dr, best_r, best_r + dr]), 0.0, r_max)
            tt = best_theta + np.array([-dtheta, 0.0, dtheta])
            local = (rr[:, None] * np.exp(1j * tt)[None, :]).ravel()
            local_vals = sign * np.asarray(values_fn(local), dtype=np.float64)
            n_evaluated += local.size
            lf = np.isfinite(local_vals)
            skips += int((~lf).sum())
            if lf.any():
                li = int(np.nanargmax(np.where(lf, local_vals, -np.inf)))
                if local_vals[li] > best_value:
                    best_value = float(local_vals[li])
                    best_r = float(rr[li // 3])
                    best_theta = float(tt[li % 3])
            dr /= 4.0
            dtheta /= 4.0

    argmax = best_r * complex(math.cos(best_theta), math.sin(best_theta))
    return SweepResult(sign * best_value, argmax, trend, skips,
                       n_evaluated, refine_iters > 0)


def classify_trend(trend, threshold: float = _SLOPE_THRESHOLD,
    tail_fraction: float = 0.5):
    """Three-valued verdict on a boundary trend.

    Fits log(circle max) against log(1/(1-r)) over the outer
    `tail_fraction` of the trend.  Slope >= +threshold reads as
    growing, <= -threshold as flat (decaying, hence bounded); anything
    in between is inconclusive because a desk-scale plateau cannot be
    told apart from slow growth.  An (almost) all-zero trend is flat.

    Returns (verdict, slope).
    """
    if not trend:
        return TREND_INCONCLUSIVE, float("nan")
    values = np.array([v for _, v in trend], dtype=np.float64)
    finite = values[np.isfinite(values)]
    if finite.size and np.nanmax(np.abs(finite)) < 1e-300:
        return TREND_FLAT, 0.0
    start = int(len(trend) * (1.0 - tail_fraction))
    tail = trend[start:]
    pts = [(r, v) for r, v in tail
           if np.isfinite(v) and v > 1e-300 and 0.0 < r < 1.0 - 1e-15]
    if len(pts) < 3:
        return TREND_INCONCLUSIVE, float("nan")
    x = np.log(1.0 / (1.0 - np.array([r for r, _ in pts])))
    y = np.log(np.array([v for _, v in pts]))
    if np.ptp(x) < 1e-12:
        return TREND_INCONCLUSIVE, float("nan")
    slope = float(np.polyfit(x, y, 1)[0])
    if slope >= threshold:
        return TREND_GROWING, slope
    if slope <= -threshold:
        return TREND_FLAT, slope
    return TREND_INCONCLUSIVE, slope
