import numpy as np
import pytest

from harmap.criteria import (NonNegPolynomial, check_lappan_poly,
                             check_min_spherical, check_thm_y, check_thm_ya,
                             cross_check, default_targets, solve_fiber)
from harmap.catalog import catalog_maps
from harmap.harmonic import HarmonicMap, jacobian
from harmap.normality import phi_power

IDENT = HarmonicMap.from_text("z", label="identity")
SQUARE = HarmonicMap.from_text("z^2", label="square")
CUSP = HarmonicMap.from_text("exp(i/(1-z))", label="cusp")
PHI2 = phi_power(2.0)


class TestNonNegPolynomial:
    def test_linear(self):
        P = NonNegPolynomial((0.0, 1.0))
        assert P(np.array([0.3]))[0] == pytest.approx(0.3)
        assert P.degree == 1

    def test_negative_coefficient_rejected(self):
        with pytest.raises(ValueError):
            NonNegPolynomial((1.0, -0.5, 2.0))

    def test_constant_rejected(self):
        with pytest.raises(ValueError):
            NonNegPolynomial((3.0,))

    def test_zero_leading_rejected(self):
        with pytest.raises(ValueError):
            NonNegPolynomial((1.0, 0.0))

    def test_horner_matches_numpy(self, rng):
        coeffs = (0.5, 0.0, 2.0, 1.25)
        P = NonNegPolynomial(coeffs)
        x = rng.random(50) * 3
        expected = np.polyval(list(reversed(coeffs)), x)
        assert np.allclose(P(x), expected, rtol=1e-14)


class TestSolveFiber:
    def test_identity_fiber(self):
        fiber = solve_fiber(IDENT, 0.3, 0.9)
        assert len(fiber.roots) == 1
        assert fiber.roots[0] == pytest.approx(0.3, abs=1e-12)
        assert fiber.residuals[0] <= 1e-12

    def test_square_fiber(self):
        fiber = solve_fiber(SQUARE, 0.25, 0.9)
        assert sorted(round(z.real, 8) for z in fiber.roots) == [-0.5, 0.5]
        assert all(abs(z.imag) <= 1e-8 for z in fiber.roots)
        assert all(r <= 1e-10 for r in fiber.residuals)

    def test_square_fiber_dense_grid_oracle(self):
        # no additional basin: every near-solution on a dense grid lies
        # next to one of the two reported roots
        xs = np.linspace(-0.9, 0.9, 601)
        grid = (xs[:, None] + 1j * xs[None, :]).ravel()
        grid = grid[np.abs(grid) <= 0.9]
        vals, _ = SQUARE.evaluate_many(grid)
        near = np.abs(vals - 0.25) < 5e-3
        for z in grid[near]:
            assert min(abs(z - 0.5), abs(z + 0.5)) < 0.05

    def test_unreachable_target_gives_empty_fiber(self):
        f = HarmonicMap.from_text("z", "z^2/2")
        fiber = solve_fiber(f, 2.0, 0.9)
        assert fiber.roots == []

    def test_roots_reverified_by_direct_evaluation(self):
        for a in (0.3 + 0.1j, -0.2 + 0.25j):
            fiber = solve_fiber(CUSP, a, 0.9)
            for z in fiber.roots:
                values, ok = CUSP.evaluate_many([z])
                assert ok[0]
                assert abs(values[0] - a) <= 1e-10

    def test_roots_pairwise_separated(self):
        fiber = solve_fiber(CUSP, 0.3 + 0.1j, 0.95)
        roots = fiber.roots
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                assert abs(roots[i] - roots[j]) >= 1e-6

    def test_constant_map_fiber_is_everything_sampled(self):
        const = HarmonicMap.from_text("0.3+0.3*i")
        fiber = solve_fiber(const, 0.3 + 0.3j, 0.9, seed_grid=12)
        assert len(fiber.roots) > 50
        other = solve_fiber(const, 1.0, 0.9, seed_grid=12)
        assert other.roots == []

    def test_newton_jacobian_identity(self, rng):
        # the real 2x2 determinant equals |h'|^2 - |g'|^2
        f = HarmonicMap.from_text("z", "z^2/2")
        from helpers import disk_points
        for z in disk_points(rng, 50, r_max=0.9):
            hc, gc, _ = f.parts_jets([z], 1)
            fz = hc[1, 0]
            fzb = np.conj(gc[1, 0])
            ux, vx = (fz + fzb).real, (fz + fzb).imag
            uy, vy = -(fz - fzb).imag, (fz - fzb).real
            det = ux * vy - uy * vx
            assert det == pytest.approx(jacobian(f, complex(z)), abs=1e-12)

    def test_monotone_in_region_radius(self):
        E = default_targets(5)
        P = NonNegPolynomial((0.0, 1.0))
        sups = []
        for r_max in (0.5, 0.7, 0.9):
            sups.append(check_lappan_poly(CUSP, P, E, PHI2,
                                          r_max).sup_over_fibers)
        assert sups == sorted(sups)


class TestMinSpherical:
    def test_reversing_map_met(self):
        f = HarmonicMap.from_text("z", "2*z")
        report = check_min_spherical(f, 0.25, 0.99)
        assert report.auxiliary_sups["inf_spherical"] >= 0.3 - 0.01
        assert report.hypothesis_met
        assert report.prediction == "normal"

    def test_critical_point_fails_every_epsilon(self):
        report = check_min_spherical(SQUARE, 1e-6, 0.9)
        assert not report.hypothesis_met
        assert report.auxiliary_sups["inf_spherical"] < 1e-3

    def test_identity_met(self):
        report = check_min_spherical(IDENT, 0.4, 0.99)
        assert report.auxiliary_sups["inf_spherical"] == pytest.approx(
            1.0 / (1.0 + 0.99 ** 2), abs=1e-3)
        assert report.hypothesis_met


class TestLappanPoly:
    def test_identity_with_linear_polynomial(self):
        report = check_lappan_poly(IDENT, NonNegPolynomial((0.0, 1.0)),
                                   default_targets(5), PHI2, 0.9)
        assert report.hypothesis_met
        assert report.prediction == "phi-normal"
        assert not report.vacuous
        assert report.sup_over_fibers > 0

    def test_constant_map_reports_but_no_prediction(self):
        const = HarmonicMap.from_text("0.3+0.3*i")
        targets = [0.3 + 0.3j] + default_targets(4)
        report = check_lappan_poly(const, NonNegPolynomial((0.5, 1.0)),
                                   targets, PHI2, 0.9, seed_grid=10)
        # P(0)/phi = 0.5/phi on the giant fiber, bounded
        assert report.sup_over_fibers <= 0.5
        assert not report.sense_preserving.ok
        assert report.prediction == "no-prediction"

    def test_wrong_cardinality_rejected(self):
        with pytest.raises(ValueError):
            check_lappan_poly(IDENT, NonNegPolynomial((0.0, 1.0)),
                              default_targets(4), PHI2, 0.9)

    def test_duplicate_targets_rejected(self):
        E = default_targets(4) + [default_targets(4)[0]]
        with pytest.raises(ValueError):
            check_lappan_poly(IDENT, NonNegPolynomial((0.0, 1.0)), E, PHI2, 0.9)


class TestThmY:
    def test_multiplicity_covers_zero_fiber(self):
        report = check_thm_y(SQUARE, 2, default_targets(6), PHI2, 0.9)
        # at the double zero both f and f' vanish
        assert report.auxiliary_sups["zero_fiber"] <= 1e-4

    def test_k1_matches_lappan_linear(self):
        E = default_targets(5)
        rep_y = check_thm_y(IDENT, 1, E, PHI2, 0.9)
        rep_l = check_lappan_poly(IDENT, NonNegPolynomial((0.0, 1.0)),
                                  E, PHI2, 0.9)
        assert abs(rep_y.sup_over_fibers - rep_l.sup_over_fibers) <= 1e-12

    def test_empty_fibers_vacuous(self):
        f = HarmonicMap.from_text("z", "z^2/2")
        E = [complex(3 + j, 1) for j in range(5)]
        report = check_thm_y(f, 1, E, PHI2, 0.9)
        assert report.vacuous
        assert report.sup_over_fibers == 0.0
        assert report.hypothesis_met  # vacuously, and flagged
        assert any("vacuous" in w for w in report.warnings)


class TestThmYa:
    def test_k1_needs_four_targets(self):
        report = check_thm_ya(IDENT, 1, default_targets(4), PHI2, 0.9)
        assert report.hypothesis_met
        # |h''|/(1+|h'|^2) = 0 for the identity
        assert report.auxiliary_sups["ya3"] == 0.0

    def test_ya3_hand_value_on_square(self):
        # root 0.5 of z^2 = 0.25: |h''|/(1+|h'|^2) = 2/(1+1) = 1
        E = [0.25] + default_targets(3)
        report = check_thm_ya(SQUARE, 1, E, PHI2, 0.9)
        assert report.auxiliary_sups["ya3"] == pytest.approx(1.0, abs=1e-6)

    def test_wrong_cardinality_rejected(self):
        with pytest.raises(ValueError):
            check_thm_ya(IDENT, 2, default_targets(6), PHI2, 0.9)


class TestCrossCheck:
    def test_invalid_phi_rejected_before_checks(self):
        with pytest.raises(ValueError):
            cross_check([IDENT], phi_power(1.0), (1,), 0.9)

    def test_identity_all_met_and_no_reds(self):
        report = cross_check([IDENT], PHI2, (1, 2), 0.99)
        assert report.n_red == 0
        assert all(row.hypothesis_met for row in report.rows)

    def test_full_catalog_zero_reds(self):
        report = cross_check(catalog_maps(), PHI2, (1, 2, 3), 0.99)
        assert report.n_red == 0
        assert len(report.rows) == len(catalog_maps()) * 8
