"""Jets (truncated Taylor expansions) and the HoloFunction wrapper.

A Jet at base point z0 of order k holds coefficients c_j = f^(j)(z0)/j!.
Derivatives obtained this way are exact to roundoff, which the boundary
functionals need for orders well beyond what finite differences can
deliver.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import SingularityError
from . import backend
from .expr import HoloExpr, to_source
from .parser import parse_expr
from .tape import Tape, compile_expr


@dataclass(frozen=True)
class Jet:
    base_point: complex
    order: int
    coeffs: tuple

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("jet order must be >= 0")
        if len(self.coeffs) != self.order + 1:
            raise ValueError("jet must carry exactly order+1 coefficients")

    def _check_compatible(self, other: "Jet"):
        if self.base_point != other.base_point or self.order != other.order:
            raise ValueError("jet arithmetic requires equal base point and order")

    def __add__(self, other: "Jet") -> "Jet":
        self._check_compatible(other)
        return Jet(self.base_point, self.order,
                   tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Jet") -> "Jet":
        self._check_compatible(other)
        return Jet(self.base_point, self.order,
                   tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: "Jet") -> "Jet":
        self._check_compatible(other)
        out = []
        for k in range(self.order + 1):
            out.append(sum(self.coeffs[j] * other.coeffs[k - j]
                           for j in range(k + 1)))
        return Jet(self.base_point, self.order, tuple(out))

    def derivative(self, k: int) -> complex:
        """k-th derivative of the underlying function at the base point."""
        if not 0 <= k <= self.order:
            raise ValueError("derivative order outside jet order")
        return math.factorial(k) * self.coeffs[k]


@dataclass(frozen=True)
class HoloFunction:
    """A holomorphic function given by an expression tree."""

    expr: HoloExpr
    label: str = ""
    _tape: Tape = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_tape", compile_expr(self.expr))

    @classmethod
    def from_text(cls, text: str, label: str = "") -> "HoloFunction":
        return cls(parse_expr(text), label or text)

    def source(self) -> str:
        return to_source(self.expr)

    def __call__(self, z: complex) -> complex:
        return evaluate(self, z)

    def eval_jet_many(self, z0, order: int):
        """Vectorized jets: (coeffs[(order+1, n)], ok[n])."""
        z0 = np.atleast_1d(np.asarray(z0, dtype=np.complex128))
        return backend.eval_tape(self._tape, z0, order)

    def evaluate_many(self, z):
        coeffs, ok = self.eval_jet_many(z, 0)
        return coeffs[0], ok

    def derivative_many(self, z, k: int):
        """k-th derivative at an array of points: (values[n], ok[n])."""
        coeffs, ok = self.eval_jet_many(z, k)
        return math.factorial(k) * coeffs[k], ok


def evaluate(func: HoloFunction, z: complex) -> complex:
    """Value at z; raises SingularityError on quotient/log singularities."""
    values, ok = func.evaluate_many([z])
    if not ok[0]:
        raise SingularityError(z)
    return complex(values[0])


def eval_jet(func: HoloFunction, z0: complex, k: int) -> Jet:
    """Jet of order k at z0 (coefficients f^(j)(z0)/j!)."""
    if k < 0:
        raise ValueError("jet order must be >= 0")
    coeffs, ok = func.eval_jet_many([z0], k)
    if not ok[0]:
        raise SingularityError(z0)
    return Jet(complex(z0), k, tuple(complex(c) for c in coeffs[:, 0]))


def derivative(func: HoloFunction, z0: complex, k: int) -> complex:
    """k-th derivative at z0, via the jet."""
    return eval_jet(func, z0, k).derivative(k)
