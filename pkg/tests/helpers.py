"""Shared oracles for the test suite.

Everything here is deliberately independent of the package's jet /
grid machinery: finite differences for derivatives, dense scans for
maxima, direct formula evaluation for cross-checks.
"""
import numpy as np


def central_diff(evaluate_many, z, h=1e-5):
    """(f(z+h) - f(z-h)) / (2h) along the real direction, vectorized.

    evaluate_many: callable returning (values, ok) for an array of
    points, e.g. HoloFunction.evaluate_many.
    """
    z = np.asarray(z, dtype=np.complex128)
    up, ok1 = evaluate_many(z + h)
    dn, ok2 = evaluate_many(z - h)
    return (up - dn) / (2.0 * h), ok1 & ok2


def rel_err(approx, exact, floor=1e-12):
    approx = np.asarray(approx)
    exact = np.asarray(exact)
    scale = np.maximum(np.maximum(np.abs(approx), np.abs(exact)), floor)
    return np.abs(approx - exact) / scale


def disk_points(rng, n, r_max=0.9):
    r = r_max * np.sqrt(rng.random(n))
    theta = 2.0 * np.pi * rng.random(n)
    return r * np.exp(1j * theta)


def cauchy_product(a, b):
    """Truncated Taylor product of two coefficient tuples, plain Python."""
    n = len(a)
    return tuple(sum(a[j] * b[k - j] for j in range(k + 1)) for k in range(n))


def rescaled_sd_formula(f, center, scale, alpha, zeta):
    """Spherical derivative of scale^alpha f(center + scale zeta) expressed
    through base-map quantities: the independent side of the rescaling
    consistency check."""
    zeta = np.asarray(zeta, dtype=np.complex128)
    w = center + scale * zeta
    sd, ok = f.spherical_derivative_many(w)
    values, _ = f.evaluate_many(w)
    q = np.abs(values) ** 2
    rho = float(scale)
    return (rho ** (1.0 + alpha) * (1.0 + q) * sd
            / (1.0 + rho ** (2.0 * alpha) * q)), ok
