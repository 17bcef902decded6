"""Fiber solver f(z) = a and the fiber-based hypothesis checkers.

Fibers are found by damped Newton iteration on the real 2x2 system
built from the Wirtinger pair (f_z = h', f_zbar = conj(g')), whose
determinant is the Jacobian |h'|^2 - |g'|^2.  Checkers evaluate the
relevant functional over the found roots and classify the sup across
an increasing region schedule; a sup over an empty fiber is 0 and the
report says so (vacuous) rather than hiding it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .gridsearch import TREND_GROWING, classify_trend, sweep_polar
from .harmonic import HarmonicMap, SensePreservingCheck, is_sense_preserving
from .normality import Phi, estimate_sup_normality, estimate_sup_phi

PREDICTION_NORMAL = "normal"
PREDICTION_PHI_NORMAL = "phi-normal"
PREDICTION_NONE = "no-prediction"

_RESIDUAL_TOL = 1e-10
_DEDUP_RADIUS = 1e-6
_E_SEPARATION = 1e-8
_NEWTON_MAX_ITER = 60
_DAMPING_MAX_HALVINGS = 20

_HYPOTHESIS_CAVEAT = ("desk-scale check of the stated hypothesis only; "
                      "whether E hits exceptional values of a limit map is "
                      "not decidable here")


@dataclass(frozen=True)
class NonNegPolynomial:
    """Polynomial with non-negative real coefficients, degree >= 1.

    coefficients[j] multiplies x^j; the leading coefficient is positive.
    """

    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if len(coeffs) < 2:
            raise ValueError("degree must be >= 1")
        if any(c < 0 for c in coeffs):
            raise ValueError("coefficients must be non-negative")
        if coeffs[-1] <= 0:
            raise ValueError("leading coefficient must be positive")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        out = np.zeros_like(x)
        for c in reversed(self.coefficients):
            out = out * x + c
        return out


@dataclass
class Fiber:
    target: complex
    roots: list
    residuals: list
    region_r_max: float

    def restrict(self, r: float) -> list:
        return [z for z in self.roots if abs(z) <= r]


def _seed_points(r_max: float, seed_grid: int) -> np.ndarray:
    xs = np.linspace(-r_max, r_max, seed_grid)
    z = (xs[:, None] + 1j * xs[None, :]).ravel()
    return z[np.abs(z) <= r_max]


def solve_fiber(f: HarmonicMap, a: complex, r_max: float,
    seed_grid: int = 24) -> Fiber:
    """All solutions of f(z) = a found in |z| <= r_max from a seed grid.

    Damped Newton with step halving; seeds are abandoned at singular
    Jacobians or when they escape the search region.  Converged points
    are deduplicated within 1e-6 and re-verified by direct evaluation.
    """
    if not 0 < r_max < 1:
        raise ValueError("r_max must lie in (0, 1)")
    a = complex(a)
    z = _seed_points(r_max, seed_grid)
    active = np.ones(z.shape[0], dtype=bool)
    escape = min(0.999999, r_max + 0.5 * (1.0 - r_max))

    def residual_abs(points):
        values, ok = f.evaluate_many(points)
        with np.errstate(all="ignore"):
            res = np.abs(values - a)
        res[~ok] = np.inf
        return res

    for _ in range(_NEWTON_MAX_ITER):
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        za = z[idx]
        hc, gc, ok = f.parts_jets(za, 1)
        fval = hc[0] + np.conj(gc[0])
        r_cpx = fval - a
        res = np.abs(r_cpx)
        res[~ok] = np.inf

        # seeds already at the floor need no further iterations
        settled = res <= 1e-15
        bad = ~ok | ~np.isfinite(res)
        fz = hc[1]
        fzb = np.conj(gc[1])
        ux = np.real(fz + fzb)
        vx = np.imag(fz + fzb)
        uy = -np.imag(fz - fzb)
        vy = np.real(fz - fzb)
        det = ux * vy - uy * vx
        singular = np.abs(det) < 1e-14

        stop = settled | bad | singular
        if stop.any():
            active[idx[stop]] = False
        move = ~stop
        if not move.any():
            continue

        mi = idx[move]
        ru, rv = np.real(r_cpx[move]), np.imag(r_cpx[move])
        d = det[move]
        dx = (-vy[move] * ru + uy[move] * rv) / d
        dy = (vx[move] * ru - ux[move] * rv) / d
        step = dx + 1j * dy

        # step halving until the residual actually decreases
        lam = np.ones(mi.shape[0])
        cur_res = res[move]
        pos = np.arange(mi.shape[0])
        accepted = np.zeros(mi.shape[0], dtype=bool)
        trial = np.empty(mi.shape[0], dtype=np.complex128)
        for _halve in range(_DAMPING_MAX_HALVINGS):
            todo = ~accepted
            if not todo.any():
                break
            cand = z[mi[todo]] + lam[todo] * step[todo]
            cand_res = residual_abs(cand)
            better = cand_res < cur_res[todo]
            sel = pos[todo][better]
            trial[sel] = cand[better]
            accepted[sel] = True
            lam[pos[todo][~better]] /= 2.0
        stalled = ~accepted
        if stalled.any():
            active[mi[stalled]] = False
        if accepted.any():
            zi = mi[accepted]
            z[zi] = trial[accepted]
            escaped = np.abs(z[zi]) > escape
            if escaped.any():
                active[zi[escaped]] = False

    # candidates: wherever iteration stopped, keep points that verify
    res_final = residual_abs(z)
    keep = (res_final <= _RESIDUAL_TOL) & (np.abs(z) <= r_max + 1e-12)
    candidates = z[keep]
    cand_res = res_final[keep]

    order = np.lexsort((candidates.imag, candidates.real))
    roots, residuals = [], []
    for i in order:
        c = complex(candidates[i])
        if all(abs(c - r) >= _DEDUP_RADIUS for r in roots):
            roots.append(c)
            residuals.append(float(cand_res[i]))
    return Fiber(a, roots, residuals, float(r_max))


@dataclass
class CriterionReport:
    theorem_id: str
    E: list
    k: Optional[int]
    sup_over_fibers: Optional[float]
    auxiliary_sups: dict
    hypothesis_met: bool
    prediction: str
    vacuous: bool = False
    sense_preserving: Optional[SensePreservingCheck] = None
    trend: list = field(default_factory=list)
    trend_verdict: str = ""
    fibers: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    notes: list = field(default_factory=list)


def _sp_samples(r_max: float) -> np.ndarray:
    radii = np.linspace(0.0, r_max, 9)
    angles = 2.0 * np.pi * np.arange(24) / 24
    return np.unique((radii[:, None] * np.exp(1j * angles)[None, :]).ravel())


def _validate_targets(E, expected: int):
    E = [complex(a) for a in E]
    if len(E) != expected:
        raise ValueError(f"target set must contain exactly {expected} values")
    for i in range(len(E)):
        for j in range(i + 1, len(E)):
            if abs(E[i] - E[j]) < _E_SEPARATION:
                raise ValueError("target values must be pairwise distinct "
                                 f"(separation >= {_E_SEPARATION:g})")
    return E


def _region_schedule(r_max: float) -> list:
    return [0.7 * r_max, 0.85 * r_max, 0.95 * r_max, r_max]


def check_min_spherical(f: HarmonicMap, epsilon: float, r_max: float,
    grid: int = 48) -> CriterionReport:
    """Spherical derivative bounded away from zero => normal."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    sweep = sweep_polar(lambda z: _sd_values(f, z), r_max, grid,
                        refine_iters=3, mode="min")
    inf_est = sweep.value
    met = bool(np.isfinite(inf_est) and inf_est > epsilon)
    return CriterionReport(
        theorem_id="1.2", E=[], k=None, sup_over_fibers=None,
        auxiliary_sups={"inf_spherical": float(inf_est), "epsilon": float(epsilon)},
        hypothesis_met=met,
        prediction=PREDICTION_NORMAL if met else PREDICTION_NONE,
        trend=sweep.trend, trend_verdict="",
        warnings=[f"{sweep.skips} singular grid nodes skipped"] if sweep.skips else [])


def _sd_values(f: HarmonicMap, z):
    sd, ok = f.spherical_derivative_many(z)
    sd[~ok] = np.nan
    return sd


def _fiber_sups(f: HarmonicMap, fibers: list, value_fn, schedule: list):
    """Sup of value_fn over fiber roots, per region radius; value_fn maps
    an ndarray of roots to an ndarray of values."""
    all_roots = np.array([z for fb in fibers for z in fb.roots],
                         dtype=np.complex128)
    if all_roots.size == 0:
        return 0.0, [(r, 0.0) for r in schedule], True
    values = np.asarray(value_fn(all_roots), dtype=np.float64)
    trend = []
    for r in schedule:
        mask = np.abs(all_roots) <= r
        trend.append((float(r), float(np.max(values[mask])) if mask.any() else 0.0))
    return float(np.max(values)), trend, False


def check_lappan_poly(f: HarmonicMap, P: NonNegPolynomial, E, phi: Phi,
    r_max: float, seed_grid: int = 24) -> CriterionReport:
    """Five-point criterion with a non-negative polynomial applied to f#."""
    E = _validate_targets(E, 5)
    sp = is_sense_preserving(f, _sp_samples(r_max))
    fibers = [solve_fiber(f, a, r_max, seed_grid) for a in E]
    schedule = _region_schedule(r_max)

    def values(roots):
        sd, ok = f.spherical_derivative_many(roots)
        out = P(sd) / phi(np.abs(roots))
        out[~ok] = np.inf
        return out

    sup, trend, vacuous = _fiber_sups(f, fibers, values, schedule)
    verdict, _ = classify_trend(trend, tail_fraction=1.0)
    met = bool(sp.ok and np.isfinite(sup) and verdict != TREND_GROWING)
    report = CriterionReport(
        theorem_id="1.3", E=E, k=None, sup_over_fibers=sup,
        auxiliary_sups={}, hypothesis_met=met,
        prediction=PREDICTION_PHI_NORMAL if met else PREDICTION_NONE,
        vacuous=vacuous, sense_preserving=sp, trend=trend,
        trend_verdict=verdict, fibers=fibers, notes=[_HYPOTHESIS_CAVEAT])
    if not sp.ok:
        report.warnings.append(
            f"sense-preserving precondition violated at z = {sp.witness}")
    if vacuous:
        report.warnings.append("all fibers empty within the region: "
                               "hypothesis vacuously true at this scale")
    return report


def _deriv_modulus_values(f: HarmonicMap, roots, orders):
    """max_i |h^(i) + conj(g^(i))| over the given orders, per root."""
    kmax = max(orders)
    hc, gc, ok = f.parts_jets(roots, kmax)
    out = np.zeros(len(roots))
    for i in orders:
        fact = math.factorial(i)
        vals = np.abs(fact * hc[i] + np.conj(fact * gc[i]))
        out = np.maximum(out, vals)
    out[~ok] = np.inf
    return out


def _esd_over_phi_values(f: HarmonicMap, phi: Phi, k: int, roots):
    esd, ok = f.extended_spherical_derivative_many(roots, k)
    out = esd / phi(np.abs(roots)) ** k
    out[~ok] = np.inf
    return out


def _ya3_values(f: HarmonicMap, k: int, roots):
    hc, gc, ok = f.parts_jets(roots, k + 1)
    fk = math.factorial(k)
    fk1 = math.factorial(k + 1)
    num = fk1 * (np.abs(hc[k + 1]) + np.abs(gc[k + 1]))
    den = 1.0 + (fk * (np.abs(hc[k]) + np.abs(gc[k]))) ** (k + 1)
    out = num / den
    out[~ok] = np.inf
    return out


def _check_extended(f: HarmonicMap, k: int, E, phi: Phi, r_max: float,
    seed_grid: int, theorem_id: str, with_ya3: bool) -> CriterionReport:
    if k < 1:
        raise ValueError("k must be a positive integer")
    expected = (k + 4) if not with_ya3 else (k // 2 + 4)
    E = _validate_targets(E, expected)
    sp = is_sense_preserving(f, _sp_samples(r_max))
    schedule = _region_schedule(r_max)

    zero_fiber = solve_fiber(f, 0j, r_max, seed_grid)
    if zero_fiber.roots:
        zf_roots = np.array(zero_fiber.roots, dtype=np.complex128)
        zero_sup = float(np.max(_deriv_modulus_values(f, zf_roots, range(k))))
        zero_vacuous = False
    else:
        zero_sup, zero_vacuous = 0.0, True

    fibers = [solve_fiber(f, a, r_max, seed_grid) for a in E]
    sup, trend, vacuous = _fiber_sups(
        f, fibers, lambda roots: _esd_over_phi_values(f, phi, k, roots), schedule)
    verdict, _ = classify_trend(trend, tail_fraction=1.0)

    aux = {"zero_fiber": zero_sup}
    met = bool(sp.ok and np.isfinite(sup) and np.isfinite(zero_sup)
               and verdict != TREND_GROWING)
    if with_ya3:
        ya3_sup, ya3_trend, _ = _fiber_sups(
            f, fibers, lambda roots: _ya3_values(f, k, roots), schedule)
        ya3_verdict, _ = classify_trend(ya3_trend, tail_fraction=1.0)
        aux["ya3"] = ya3_sup
        met = met and np.isfinite(ya3_sup) and ya3_verdict != TREND_GROWING

    report = CriterionReport(
        theorem_id=theorem_id, E=E, k=k, sup_over_fibers=sup,
        auxiliary_sups=aux, hypothesis_met=met,
        prediction=PREDICTION_PHI_NORMAL if met else PREDICTION_NONE,
        vacuous=vacuous, sense_preserving=sp, trend=trend,
        trend_verdict=verdict, fibers=[zero_fiber] + fibers,
        notes=[_HYPOTHESIS_CAVEAT,
               "zero-fiber bound uses |h^(i) + conj(g^(i))|"])
    if not sp.ok:
        report.warnings.append(
            f"sense-preserving precondition violated at z = {sp.witness}")
    if vacuous:
        report.warnings.append("all target fibers empty within the region: "
                               "hypothesis vacuously true at this scale")
    if zero_vacuous:
        report.warnings.append("zero fiber empty within the region")
    return report


def check_thm_y(f: HarmonicMap, k: int, E, phi: Phi, r_max: float,
    seed_grid: int = 24) -> CriterionReport:
    """Extended-derivative criterion over k+4 targets plus the zero-fiber
    derivative bound."""
    return _check_extended(f, k, E, phi, r_max, seed_grid, "1.5", False)


def check_thm_ya(f: HarmonicMap, k: int, E, phi: Phi, r_max: float,
    seed_grid: int = 24) -> CriterionReport:
    """Reduced-cardinality variant: floor(k/2)+4 targets, with the extra
    (k+1)-derivative ratio bounded on the fibers."""
    return _check_extended(f, k, E, phi, r_max, seed_grid, "1.6", True)


# -- cross-check harness -----------------------------------------------------


def default_targets(count: int, radius: float = 0.41) -> list:
    """Deterministic generic target set: golden-angle points on a circle."""
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    return [radius * complex(math.cos(2 * math.pi * (j * golden + 0.05)),
                             math.sin(2 * math.pi * (j * golden + 0.05)))
            for j in range(count)]


@dataclass
class CrossCheckRow:
    map_label: str
    checker: str
    hypothesis_met: bool
    prediction: str
    direct_verdict: str
    red: bool
    vacuous: bool
    warnings: list


@dataclass
class CrossCheckReport:
    rows: list
    n_red: int
    phi_spec: str
    r_max: float
    k_list: list
    warnings: list
    lipschitz_log: list


def cross_check(catalog, phi: Phi, k_list, r_max: float,
    epsilon: float = 0.25, grid: int = 48, seed_grid: int = 20,
    include_lipschitz: bool = False, lipschitz_pairs: int = 20000,
    seed: int = 0) -> CrossCheckReport:
    """Run every applicable checker on every map and flag contradictions.

    A row is red when the checker's hypothesis is met while the direct
    estimate of the predicted quantity trends growing.  phi must pass
    validation before any checks run.
    """
    from .metrics import lipschitz_quotient_estimate
    from .normality import validate_phi

    validation = validate_phi(phi)
    if not validation.all_ok:
        raise ValueError(f"phi {phi.spec!r} failed validation; rejected "
                         "before any checks run")

    rows, warnings, lipschitz_log = [], [], []
    for f in catalog:
        label = f.label or f.h.source()
        direct_normality = estimate_sup_normality(f, r_max, grid, 2)
        direct_phi = estimate_sup_phi(f, phi, r_max, grid, 2)

        def add_row(checker, report, direct_verdict):
            red = bool(report.hypothesis_met and direct_verdict == TREND_GROWING)
            rows.append(CrossCheckRow(label, checker, report.hypothesis_met,
                                      report.prediction, direct_verdict, red,
                                      report.vacuous, list(report.warnings)))

        add_row("1.2", check_min_spherical(f, epsilon, r_max, grid),
                direct_normality.verdict)
        add_row("1.3",
                check_lappan_poly(f, NonNegPolynomial((0.0, 1.0)),
                                  default_targets(5), phi, r_max, seed_grid),
                direct_phi.verdict)
        for k in k_list:
            add_row(f"1.5:k={k}",
                    check_thm_y(f, k, default_targets(k + 4), phi, r_max,
                                seed_grid),
                    direct_phi.verdict)
            add_row(f"1.6:k={k}",
                    check_thm_ya(f, k, default_targets(k // 2 + 4), phi,
                                 r_max, seed_grid),
                    direct_phi.verdict)

        if include_lipschitz:
            est = lipschitz_quotient_estimate(f, lipschitz_pairs, r_max, seed)
            ratio = (est.value / direct_normality.value
                     if direct_normality.value > 0 else float("nan"))
            lipschitz_log.append({
                "map": label, "lipschitz_estimate": est.value,
                "normality_sup": direct_normality.value,
                "quotient_vs_sup": ratio,
                "sigma_convention": est.sigma_convention})

    n_red = sum(1 for row in rows if row.red)
    if n_red:
        warnings.append(f"{n_red} red inconsistencies found")
    return CrossCheckReport(rows, n_red, phi.spec, float(r_max),
                            list(k_list), warnings, lipschitz_log)
