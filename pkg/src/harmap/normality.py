"""Boundary functionals and their sup estimation over the disk.

The normality functional (1-|z|^2) f#(z) and the weighted variants
f#/phi, f#(k)/phi^k are swept over polar grids clustered toward the
boundary.  A sweep never claims a true sup: the result carries a trend
(circle max per radius) and a three-valued verdict from its slope.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, SingularityError
from .gridsearch import SweepResult, classify_trend, sweep_polar
from .harmonic import HarmonicMap

CONVEXITY_VERIFIED = "verified"
CONVEXITY_FAILED = "failed"
CONVEXITY_UNCHECKED = "unchecked"


@dataclass
class Phi:
    """A weight phi: [0,1) -> (0,inf), power kind (1-r)^(-s) or tabulated."""

    kind: str                      # "power" or "table"
    spec: str                      # the spec string that produced it
    _eval: Callable = field(repr=False)
    s: Optional[float] = None
    convexity_flag: str = CONVEXITY_UNCHECKED

    def __call__(self, r):
        r = np.asarray(r, dtype=np.float64)
        if np.any(r < 0.0) or np.any(r >= 1.0):
            raise DomainError("phi is defined on [0, 1)")
        return self._eval(r)


def phi_power(s: float) -> Phi:
    s = float(s)
    return Phi("power", f"pow:{s:g}", lambda r: (1.0 - r) ** (-s), s)


def phi_table(path) -> Phi:
    data = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
    if data.shape[1] != 2:
        raise ValueError("phi table needs two columns: r, phi(r)")
    r_tab, v_tab = data[:, 0], data[:, 1]
    order = np.argsort(r_tab)
    r_tab, v_tab = r_tab[order], v_tab[order]
    if np.any(v_tab <= 0):
        raise ValueError("phi table values must be positive")
    if np.any(r_tab < 0) or np.any(r_tab >= 1):
        raise ValueError("phi table radii must lie in [0, 1)")

    def interp(r):
        return np.interp(r, r_tab, v_tab)

    return Phi("table", f"table:{path}", interp)


def parse_phi(spec: str) -> Phi:
    """Parse "pow:<s>" or "table:<path>"."""
    kind, _, arg = spec.partition(":")
    if kind == "pow" and arg:
        return phi_power(float(arg))
    if kind == "table" and arg:
        return phi_table(arg)
    raise ValueError(f"bad phi spec {spec!r}; use pow:<s> or table:<path>")


_DEFAULT_R_PROBE = (0.9, 0.99, 0.999, 0.9999, 0.99999, 0.999999)
_DEFAULT_A_PROBE = (0.9, 0.99, 0.999)


@dataclass
class PhiValidation:
    growth_ok: bool                 # phi(r)(1-r) -> infinity proxy
    compact_ok: bool                # R_a -> 1 on the probed compact set
    convexity_ok: bool              # discrete convexity of 1/phi
    growth_values: list             # phi(r)(1-r) along r_probe
    compact_devs: list              # (a, max |R_a - 1|) along a_probe
    notes: list

    @property
    def all_ok(self) -> bool:
        return self.growth_ok and self.compact_ok and self.convexity_ok


def validate_phi(phi: Phi, r_probe=_DEFAULT_R_PROBE, compact_radius: float = 1.0,
    a_probe=_DEFAULT_A_PROBE, compact_tol: float = 0.1) -> PhiValidation:
    """Check the smoothly-increasing conditions and convexity of 1/phi.

    (i) phi(r)(1-r) must exceed 10x its first probe value and increase
    on the last 5 probes; (ii) max over |z| <= compact_radius of
    |phi(|a + z/phi(a)|)/phi(a) - 1| must decrease along a_probe and
    end below compact_tol; (iii) second differences of 1/phi on a
    uniform grid must be >= -1e-12.  Probes of (ii) that leave [0,1)
    fail the condition rather than raising, so rejection reports stay
    printable.
    """
    notes = []
    r_probe = np.asarray(r_probe, dtype=np.float64)
    a_probe = np.asarray(a_probe, dtype=np.float64)
    if np.any(np.diff(r_probe) <= 0) or np.any(r_probe >= 1) or np.any(r_probe < 0):
        raise ValueError("r_probe must increase toward 1 inside [0, 1)")
    if np.any(np.diff(a_probe) <= 0) or np.any(a_probe >= 1) or np.any(a_probe < 0):
        raise ValueError("a_probe must increase toward 1 inside [0, 1)")
    if compact_radius <= 0:
        raise ValueError("compact_radius must be positive")

    growth = phi(r_probe) * (1.0 - r_probe)
    tail = growth[-5:] if growth.size >= 5 else growth
    growth_ok = bool(growth[-1] > 10.0 * growth[0]
                     and np.all(np.diff(tail) > 0))

    # one compact set only; a known under-approximation of the
    # uniform-on-compacts requirement
    angles = 2.0 * np.pi * np.arange(64) / 64
    disk = (np.linspace(0.0, 1.0, 9)[:, None]
            * compact_radius * np.exp(1j * angles)[None, :]).ravel()
    devs = []
    compact_ok = True
    for a in a_probe:
        pa = float(phi(np.array([a]))[0])
        moved = np.abs(a + disk / pa)
        if np.any(moved >= 1.0):
            notes.append(f"compact probe at a={a:g} leaves [0,1); condition failed")
            devs.append((float(a), float("inf")))
            compact_ok = False
            continue
        ratio = phi(moved) / pa
        devs.append((float(a), float(np.max(np.abs(ratio - 1.0)))))
    if compact_ok:
        seq = [d for _, d in devs]
        compact_ok = bool(all(x > y for x, y in zip(seq, seq[1:]))
                          and seq[-1] < compact_tol)

    r_grid = np.linspace(0.0, float(a_probe[-1]), 512)
    inv = 1.0 / phi(r_grid)
    second = np.diff(inv, 2)
    convexity_ok = bool(np.all(second >= -1e-12))
    phi.convexity_flag = CONVEXITY_VERIFIED if convexity_ok else CONVEXITY_FAILED

    return PhiValidation(growth_ok, compact_ok, convexity_ok,
                         [float(v) for v in growth], devs, notes)


# -- functionals ------------------------------------------------------------


def normality_functional_many(f: HarmonicMap, z):
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    sd, ok = f.spherical_derivative_many(z)
    out = (1.0 - np.abs(z) ** 2) * sd
    out[~ok] = np.nan
    return out


def normality_functional(f: HarmonicMap, z: complex) -> float:
    """(1 - |z|^2) f#(z) for |z| < 1."""
    if abs(z) >= 1:
        raise DomainError("normality functional requires |z| < 1")
    value = normality_functional_many(f, [z])[0]
    if not np.isfinite(value):
        raise SingularityError(z)
    return float(value)


def phi_normality_functional_many(f: HarmonicMap, phi: Phi, z, k: Optional[int] = None):
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    weights = phi(np.abs(z))
    if k is None:
        sd, ok = f.spherical_derivative_many(z)
        out = sd / weights
    else:
        sd, ok = f.extended_spherical_derivative_many(z, k)
        out = sd / weights ** k
    out[~ok] = np.nan
    return out


def phi_normality_functional(f: HarmonicMap, phi: Phi, z: complex) -> float:
    """f#(z) / phi(|z|)."""
    if abs(z) >= 1:
        raise DomainError("phi-normality functional requires |z| < 1")
    value = phi_normality_functional_many(f, phi, [z])[0]
    if not np.isfinite(value):
        raise SingularityError(z)
    return float(value)


# -- sup estimation ----------------------------------------------------------


@dataclass
class SupEstimate:
    value: float
    argmax: complex
    r_max: float
    grid_resolution: int
    refined: bool
    trend: list
    verdict: str
    slope: float
    skips: int

    @classmethod
    def from_sweep(cls, sweep: SweepResult, r_max, grid):
        verdict, slope = classify_trend(sweep.trend)
        return cls(sweep.value, sweep.argmax, float(r_max), int(grid),
                   sweep.refined, sweep.trend, verdict, slope, sweep.skips)


def estimate_sup_normality(f: HarmonicMap, r_max: float, grid: int = 64,
    refine_iters: int = 3) -> SupEstimate:
    """Polar-sweep estimate of sup (1-|z|^2) f# over |z| <= r_max."""
    sweep = sweep_polar(lambda z: normality_functional_many(f, z),
                        r_max, grid, refine_iters)
    return SupEstimate.from_sweep(sweep, r_max, grid)


def estimate_sup_phi(f: HarmonicMap, phi: Phi, r_max: float, grid: int = 64,
    refine_iters: int = 3, k: Optional[int] = None) -> SupEstimate:
    """Polar-sweep estimate of sup f#/phi (k None) or sup f#(k)/phi^k."""
    sweep = sweep_polar(lambda z: phi_normality_functional_many(f, phi, z, k),
                        r_max, grid, refine_iters)
    return SupEstimate.from_sweep(sweep, r_max, grid)
