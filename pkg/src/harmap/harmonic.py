"""Planar harmonic mappings f = h + conj(g) on the unit disk.

h and g are holomorphic; all first-order geometry (Jacobian,
dilatation, spherical derivative) comes from their jets.  Vectorized
`*_many` variants return (values, ok) pairs where ok marks points that
evaluated without hitting a singularity; scalar variants raise instead.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, SingularityError, UndefinedDilatationError
from .funcexpr import Const, HoloFunction, Prod, Quot, Sum, Var, substitute

_ZERO = HoloFunction(Const(0.0), "0")


@dataclass(frozen=True)
class HarmonicMap:
    h: HoloFunction
    g: HoloFunction = _ZERO
    label: str = ""

    @classmethod
    def from_text(cls, h_text: str, g_text: Optional[str] = None,
                  label: str = "") -> "HarmonicMap":
        h = HoloFunction.from_text(h_text)
        g = HoloFunction.from_text(g_text) if g_text is not None else _ZERO
        return cls(h, g, label)

    def is_canonical_at(self, z0: complex = 0j, tol: float = 1e-12) -> bool:
        """Report (not enforce) the normalization g(z0) = 0."""
        values, ok = self.g.evaluate_many([z0])
        return bool(ok[0]) and abs(values[0]) <= tol

    # -- vectorized core ------------------------------------------------

    def parts_jets(self, z, order: int):
        """Jets of h and g at an array of points.

        Returns (hc, gc, ok) with hc, gc of shape (order+1, n); columns
        where either part is singular are flagged ok=False.
        """
        z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
        hc, ok_h = self.h.eval_jet_many(z, order)
        gc, ok_g = self.g.eval_jet_many(z, order)
        return hc, gc, ok_h & ok_g

    def evaluate_many(self, z):
        hc, gc, ok = self.parts_jets(z, 0)
        return hc[0] + np.conj(gc[0]), ok

    def spherical_derivative_many(self, z):
        """(|h'| + |g'|) / (1 + |f|^2) at an array of points."""
        hc, gc, ok = self.parts_jets(z, 1)
        f = hc[0] + np.conj(gc[0])
        with np.errstate(all="ignore"):
            return (np.abs(hc[1]) + np.abs(gc[1])) / (1.0 + np.abs(f) ** 2), ok

    def extended_spherical_derivative_many(self, z, k: int):
        """(|h^(k)| + |g^(k)|) / (1 + |f|^(k+1)) at an array of points."""
        if k < 1:
            raise ValueError("extended spherical derivative requires k >= 1")
        hc, gc, ok = self.parts_jets(z, k)
        fact = math.factorial(k)
        f = hc[0] + np.conj(gc[0])
        num = fact * (np.abs(hc[k]) + np.abs(gc[k]))
        with np.errstate(all="ignore"):
            return num / (1.0 + np.abs(f) ** (k + 1)), ok


@dataclass(frozen=True)
class RescaledMap:
    """zeta -> scale^alpha * f(center + scale*zeta).

    Stored by parameters rather than a rewritten tree: scale^alpha is a
    positive real, so the h-part is scale^alpha*h(center + scale*zeta)
    and likewise for g, and jets follow from base-map jets by the chain
    rule with the real factor pulled through.
    """

    base: HarmonicMap
    center: complex
    scale: float
    alpha: float
    prefactor: float = field(init=False)

    def __post_init__(self):
        if self.scale <= 0:
            raise DomainError("rescaling requires scale > 0")
        if self.alpha <= -1:
            raise DomainError("rescaling requires alpha > -1")
        # exp(alpha*log(scale)) is well defined since scale > 0
        object.__setattr__(self, "prefactor",
                           math.exp(self.alpha * math.log(self.scale)))

    def _pullback(self, zeta):
        zeta = np.atleast_1d(np.asarray(zeta, dtype=np.complex128))
        return self.center + self.scale * zeta

    def evaluate_many(self, zeta):
        values, ok = self.base.evaluate_many(self._pullback(zeta))
        return self.prefactor * values, ok

    def evaluate(self, zeta: complex) -> complex:
        values, ok = self.evaluate_many([zeta])
        if not ok[0]:
            raise SingularityError(zeta)
        return complex(values[0])

    def spherical_derivative_many(self, zeta):
        """Spherical derivative of the rescaled map from its own parts:
        part derivatives are scale^(alpha+1) times base part derivatives."""
        w = self._pullback(zeta)
        hc, gc, ok = self.base.parts_jets(w, 1)
        dh = self.prefactor * self.scale * hc[1]
        dg = self.prefactor * self.scale * gc[1]
        value = self.prefactor * (hc[0] + np.conj(gc[0]))
        with np.errstate(all="ignore"):
            return (np.abs(dh) + np.abs(dg)) / (1.0 + np.abs(value) ** 2), ok

    def spherical_derivative(self, zeta: complex) -> float:
        values, ok = self.spherical_derivative_many([zeta])
        if not ok[0]:
            raise SingularityError(zeta)
        return float(values[0])


# -- scalar operations ----------------------------------------------------


def _scalar(map_values, z):
    values, ok = map_values([z])
    if not ok[0]:
        raise SingularityError(z)
    return values[0]


def evaluate(f: HarmonicMap, z: complex) -> complex:
    """h(z) + conj(g(z))."""
    return complex(_scalar(f.evaluate_many, z))


def f_derivative(f: HarmonicMap, z: complex, i: int) -> complex:
    """h^(i)(z) + conj(g^(i)(z)); i = 0 gives the value itself."""
    if i < 0:
        raise ValueError("derivative order must be >= 0")
    hc, gc, ok = f.parts_jets([z], i)
    if not ok[0]:
        raise SingularityError(z)
    fact = math.factorial(i)
    return complex(fact * hc[i, 0] + np.conj(fact * gc[i, 0]))


def jacobian(f: HarmonicMap, z: complex) -> float:
    """|h'(z)|^2 - |g'(z)|^2."""
    hc, gc, ok = f.parts_jets([z], 1)
    if not ok[0]:
        raise SingularityError(z)
    return float(abs(hc[1, 0]) ** 2 - abs(gc[1, 0]) ** 2)


def dilatation(f: HarmonicMap, z: complex) -> complex:
    """g'(z)/h'(z); raises UndefinedDilatationError where h' = 0."""
    hc, gc, ok = f.parts_jets([z], 1)
    if not ok[0]:
        raise SingularityError(z)
    hp = complex(hc[1, 0])
    if hp == 0:
        raise UndefinedDilatationError(z)
    return complex(gc[1, 0]) / hp


@dataclass(frozen=True)
class SensePreservingCheck:
    ok: bool
    witness: Optional[complex]
    samples_checked: int


def is_sense_preserving(f: HarmonicMap, samples) -> SensePreservingCheck:
    """h' != 0 and J_f > 0 at every sample; on failure the first failing
    sample (in the given order) is the witness."""
    samples = np.atleast_1d(np.asarray(samples, dtype=np.complex128))
    hc, gc, ok = f.parts_jets(samples, 1)
    if not ok.all():
        bad = int(np.argmin(ok))
        raise SingularityError(complex(samples[bad]))
    hp = np.abs(hc[1])
    jac = hp ** 2 - np.abs(gc[1]) ** 2
    failing = (hp == 0) | (jac <= 0)
    if failing.any():
        first = int(np.argmax(failing))
        return SensePreservingCheck(False, complex(samples[first]), len(samples))
    return SensePreservingCheck(True, None, len(samples))


def spherical_derivative(f: HarmonicMap, z: complex) -> float:
    return float(_scalar(f.spherical_derivative_many, z))


def extended_spherical_derivative(f: HarmonicMap, z: complex, k: int) -> float:
    values, ok = f.extended_spherical_derivative_many([z], k)
    if not ok[0]:
        raise SingularityError(z)
    return float(values[0])


def precompose_automorphism(f: HarmonicMap, a: complex, theta: float) -> HarmonicMap:
    """f composed with the disk automorphism
    sigma(z) = e^(i*theta) (z + a) / (1 + conj(a) z), realized by
    substitution in the expression trees."""
    a = complex(a)
    if abs(a) >= 1:
        raise DomainError("automorphism parameter requires |a| < 1")
    rotation = cmath.exp(1j * theta)
    if a == 0 and rotation == 1:
        return HarmonicMap(f.h, f.g, f.label)
    core: object
    if a == 0:
        core = Var()
    else:
        core = Quot(Sum(Var(), Const(a)),
                    Sum(Const(1.0), Prod(Const(a.conjugate()), Var())))
    sigma = core if rotation == 1 else Prod(Const(rotation), core)
    h = HoloFunction(substitute(f.h.expr, sigma), f.h.label)
    g = HoloFunction(substitute(f.g.expr, sigma), f.g.label)
    return HarmonicMap(h, g, f.label)


def rescale(f: HarmonicMap, center: complex, scale: float, alpha: float) -> RescaledMap:
    """zeta -> scale^alpha f(center + scale*zeta) as a RescaledMap."""
    return RescaledMap(f, complex(center), float(scale), float(alpha))


# -- map file format -------------------------------------------------------


def map_to_record(f: HarmonicMap) -> dict:
    """{"h": ..., "g": ..., "label": ...}; g omitted when identically 0."""
    record = {"h": f.h.source()}
    if f.g.expr != Const(0.0):
        record["g"] = f.g.source()
    record["label"] = f.label
    return record


def map_from_record(record: dict) -> HarmonicMap:
    if "h" not in record:
        raise KeyError("map record requires an 'h' expression")
    g_text = record.get("g")
    return HarmonicMap.from_text(record["h"], g_text, record.get("label", ""))


def load_map(path) -> HarmonicMap:
    with open(path, "r", encoding="utf-8") as fh:
        return map_from_record(json.load(fh))


def save_map(f: HarmonicMap, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(map_to_record(f), fh, indent=2)
        fh.write("\n")
