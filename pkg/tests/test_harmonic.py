import numpy as np
import pytest

from harmap.errors import DomainError, SingularityError, UndefinedDilatationError
from harmap.harmonic import (HarmonicMap, dilatation, evaluate,
                             extended_spherical_derivative, f_derivative,
                             is_sense_preserving, jacobian, load_map,
                             map_from_record, map_to_record,
                             precompose_automorphism, rescale, save_map,
                             spherical_derivative)
from helpers import disk_points, rescaled_sd_formula

SHEAR = HarmonicMap.from_text("z", "z^2/2", label="shear")
IDENT = HarmonicMap.from_text("z", label="identity")


class TestEvaluate:
    def test_shear_value(self):
        assert evaluate(SHEAR, 0.5) == pytest.approx(0.625)

    def test_identity(self):
        assert evaluate(IDENT, 0.3 + 0.1j) == pytest.approx(0.3 + 0.1j)

    def test_pure_conjugate(self):
        f = HarmonicMap.from_text("0", "z")
        assert evaluate(f, 1j) == pytest.approx(-1j)


class TestDerivatives:
    def test_first_order(self):
        assert f_derivative(SHEAR, 0.0, 1) == pytest.approx(1.0)

    def test_second_order_comes_from_g(self):
        assert f_derivative(SHEAR, 0.0, 2) == pytest.approx(1.0)

    def test_zeroth_is_value(self, rng):
        for z in disk_points(rng, 10):
            assert f_derivative(SHEAR, z, 0) == pytest.approx(evaluate(SHEAR, z))


class TestJacobianDilatation:
    def test_shear_jacobian(self):
        assert jacobian(SHEAR, 0.5) == pytest.approx(0.75)

    def test_identity_jacobian(self, rng):
        for z in disk_points(rng, 5):
            assert jacobian(IDENT, z) == pytest.approx(1.0)

    def test_degenerate_jacobian(self, rng):
        f = HarmonicMap.from_text("z", "z")
        for z in disk_points(rng, 5):
            assert jacobian(f, z) == pytest.approx(0.0)

    def test_shear_dilatation(self):
        assert dilatation(SHEAR, 0.5) == pytest.approx(0.5)

    def test_zero_dilatation(self, rng):
        for z in disk_points(rng, 5):
            assert dilatation(IDENT, z) == 0

    def test_undefined_dilatation(self):
        f = HarmonicMap.from_text("z^2", "z^2")
        with pytest.raises(UndefinedDilatationError):
            dilatation(f, 0.0)

    def test_jacobian_sign_matches_dilatation_modulus(self, rng):
        maps = [SHEAR, HarmonicMap.from_text("z", "2*z"),
                HarmonicMap.from_text("(z+0.5)/(1+0.5*z)", "z^2/4")]
        z = disk_points(rng, 200, r_max=0.95)
        for f in maps:
            hc, gc, ok = f.parts_jets(z, 1)
            jac = np.abs(hc[1]) ** 2 - np.abs(gc[1]) ** 2
            has_deriv = ok & (np.abs(hc[1]) > 0)
            omega = np.abs(gc[1][has_deriv] / hc[1][has_deriv])
            assert np.all((jac[has_deriv] >= 0) == (omega <= 1))


class TestSensePreserving:
    def test_shear_on_grid(self, rng):
        samples = disk_points(rng, 400, r_max=0.99)
        check = is_sense_preserving(SHEAR, samples)
        assert check.ok and check.witness is None

    def test_reversing_map(self):
        check = is_sense_preserving(HarmonicMap.from_text("z", "2*z"), [0.1, 0.5j])
        assert not check.ok
        assert check.witness == 0.1

    def test_critical_point_of_h(self):
        check = is_sense_preserving(HarmonicMap.from_text("z^2"), [0.0, 0.5])
        assert not check.ok
        assert check.witness == 0


class TestSphericalDerivative:
    def test_identity_at_zero(self):
        assert spherical_derivative(IDENT, 0.0) == pytest.approx(1.0)

    def test_identity_at_half(self):
        assert spherical_derivative(IDENT, 0.5) == pytest.approx(0.8)

    def test_shear_hand_value(self):
        assert spherical_derivative(SHEAR, 0.5) == pytest.approx(
            1.5 / 1.390625, rel=1e-12)

    def test_marty_reduction(self, rng):
        # g = 0 reduces to the classical |h'|/(1+|h|^2) exactly
        for h_text in ["z", "exp(i/(1-z))", "(z+0.5)/(1+0.5*z)", "z^2"]:
            f = HarmonicMap.from_text(h_text)
            z = disk_points(rng, 100, r_max=0.9)
            sd, ok = f.spherical_derivative_many(z)
            hc, ok_h = f.h.eval_jet_many(z, 1)
            classical = np.abs(hc[1]) / (1.0 + np.abs(hc[0]) ** 2)
            assert np.max(np.abs(sd[ok] - classical[ok])) <= 1e-14


class TestExtendedSphericalDerivative:
    def test_k1_reduces_to_spherical(self, rng):
        for f in [SHEAR, HarmonicMap.from_text("exp(i/(1-z))", "z^2/4")]:
            z = disk_points(rng, 50, r_max=0.9)
            esd, ok1 = f.extended_spherical_derivative_many(z, 1)
            sd, ok2 = f.spherical_derivative_many(z)
            assert np.array_equal(ok1, ok2)
            assert np.max(np.abs(esd[ok1] - sd[ok1])) == 0.0

    def test_shear_second_order(self):
        assert extended_spherical_derivative(SHEAR, 0.0, 2) == pytest.approx(1.0)

    def test_cube_third_order(self):
        f = HarmonicMap.from_text("z^3")
        assert extended_spherical_derivative(f, 0.0, 3) == pytest.approx(6.0)

    def test_k_must_be_positive(self):
        with pytest.raises(ValueError):
            extended_spherical_derivative(SHEAR, 0.0, 0)


class TestPrecomposeAutomorphism:
    def test_identity_parameters_leave_map_unchanged(self):
        g = precompose_automorphism(SHEAR, 0.0, 0.0)
        xs = np.linspace(-0.65, 0.65, 20)
        grid = (xs[:, None] + 1j * xs[None, :]).ravel()
        v1, _ = SHEAR.evaluate_many(grid)
        v2, _ = g.evaluate_many(grid)
        assert np.max(np.abs(v1 - v2)) == 0.0

    def test_substitution_on_identity_gives_mobius(self):
        g = precompose_automorphism(IDENT, 0.5, 0.0)
        expected = HarmonicMap.from_text("(z+0.5)/(1+0.5*z)")
        for z in [0.0, 0.3j, -0.2 + 0.1j]:
            assert evaluate(g, z) == pytest.approx(evaluate(expected, z))

    def test_boundary_parameter_rejected(self):
        with pytest.raises(DomainError):
            precompose_automorphism(SHEAR, 1.0, 0.0)

    def test_rotation(self, rng):
        theta = 1.2
        g = precompose_automorphism(IDENT, 0.0, theta)
        for z in disk_points(rng, 5):
            assert evaluate(g, z) == pytest.approx(np.exp(1j * theta) * z)


class TestRescaledMap:
    def test_trivial_rescale_is_pointwise_equal(self, rng):
        r = rescale(SHEAR, 0.0, 1.0, 0.0)
        for z in disk_points(rng, 10, r_max=0.8):
            assert r.evaluate(z) == pytest.approx(evaluate(SHEAR, z))

    def test_scaling_identity_map(self):
        r = rescale(IDENT, 0.0, 0.1, 0.0)
        assert r.evaluate(1.0) == pytest.approx(0.1)

    def test_parameter_validation(self):
        with pytest.raises(DomainError):
            rescale(SHEAR, 0.0, -0.5, 0.0)
        with pytest.raises(DomainError):
            rescale(SHEAR, 0.0, 0.5, -1.0)

    def test_consistency_with_base_map_formula(self, rng):
        # own-parts spherical derivative vs the base-map expression, 50
        # random parameter draws
        for _ in range(50):
            center = complex(*(0.5 * (rng.random(2) - 0.5)))
            scale = 10.0 ** rng.uniform(-3, -0.7)
            alpha = rng.uniform(-0.9, 3.0)
            r = rescale(SHEAR, center, scale, alpha)
            zeta = disk_points(rng, 20, r_max=2.0)
            own, ok1 = r.spherical_derivative_many(zeta)
            formula, ok2 = rescaled_sd_formula(SHEAR, center, scale, alpha, zeta)
            use = ok1 & ok2
            assert np.max(np.abs(own[use] - formula[use])
                          / np.maximum(np.abs(formula[use]), 1e-30)) <= 1e-10

    def test_spherical_derivative_matches_finite_differences(self, rng):
        center, scale, alpha = 0.2 + 0.1j, 0.05, 0.5
        r = rescale(SHEAR, center, scale, alpha)
        pref = r.prefactor
        h_part = SHEAR.h
        g_part = SHEAR.g

        def part_values(part, zeta):
            vals, ok = part.evaluate_many(center + scale * np.asarray(zeta))
            return pref * vals, ok

        for zeta in disk_points(rng, 10, r_max=1.5):
            d = 1e-6
            hp = (part_values(h_part, [zeta + d])[0][0]
                  - part_values(h_part, [zeta - d])[0][0]) / (2 * d)
            gp = (part_values(g_part, [zeta + d])[0][0]
                  - part_values(g_part, [zeta - d])[0][0]) / (2 * d)
            val = r.evaluate(zeta)
            oracle = (abs(hp) + abs(gp)) / (1.0 + abs(val) ** 2)
            assert r.spherical_derivative(zeta) == pytest.approx(oracle, rel=1e-6)


class TestMapFileFormat:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "shear.json"
        save_map(SHEAR, path)
        loaded = load_map(path)
        assert loaded.h.source() == SHEAR.h.source()
        assert loaded.g.source() == SHEAR.g.source()
        assert loaded.label == "shear"

    def test_missing_g_means_zero(self):
        f = map_from_record({"h": "z", "label": "ident"})
        assert evaluate(f, 0.4j) == pytest.approx(0.4j)
        record = map_to_record(f)
        assert "g" not in record

    def test_h_required(self):
        with pytest.raises(KeyError):
            map_from_record({"label": "nope"})

    def test_singularity_error_carries_point(self):
        f = HarmonicMap.from_text("1/(1-z)")
        with pytest.raises(SingularityError):
            evaluate(f, 1.0)

    def test_canonical_normalization_reported_not_enforced(self):
        assert SHEAR.is_canonical_at(0.0)
        shifted = HarmonicMap.from_text("z", "z^2/2 + 0.3")
        assert not shifted.is_canonical_at(0.0)
        # still evaluates fine
        assert evaluate(shifted, 0.0) == pytest.approx(0.3)
