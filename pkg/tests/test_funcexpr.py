import math

import numpy as np
import pytest

from harmap.errors import (ExprSyntaxError, NegativeExponentError,
                           SingularityError, UnknownIdentifierError)
from harmap.funcexpr import (Const, Exp, HoloFunction, Jet, Pow, Prod, Quot,
                             Sum, Var, derivative, eval_jet, evaluate,
                             parse_expr, to_source)
from helpers import cauchy_product, central_diff, disk_points, rel_err

CORPUS = [
    "z", "i", "2.5", "z^2 + i*z", "exp(i/(1-z))", "(z+0.5)/(1+0.5*z)",
    "z^2/2", "2*z", "z^3", "sin(z)*cos(z)", "log(2+z)", "-z", "-3.5*z^4",
    "z^0", "1e-3*z + 2.5e2", "exp(sin(cos(z)))", "(z^2)^3",
    "z - -2.0", "0.25*z^2 - i/(2+z)",
]

CATALOG_EXPRS = ["z", "0.3+0.3*i", "(z+0.5)/(1+0.5*z)", "z^2/2",
                 "exp(i/(1-z))", "z^2/4", "2*z", "z^2"]


class TestParser:
    def test_sum_of_power_and_product(self):
        assert parse_expr("z^2 + i*z") == Sum(Pow(Var(), 2),
                                              Prod(Const(1j), Var()))

    def test_nested_function_call(self):
        assert parse_expr("exp(i/(1-z))") == Exp(
            Quot(Const(1j), parse_expr("1-z")))

    def test_negative_exponent_rejected(self):
        with pytest.raises(NegativeExponentError):
            parse_expr("z^-1")

    def test_fractional_exponent_rejected(self):
        with pytest.raises(ExprSyntaxError):
            parse_expr("z^2.5")

    def test_unknown_identifier(self):
        with pytest.raises(UnknownIdentifierError) as err:
            parse_expr("z + w")
        assert err.value.position == 4

    def test_implicit_multiplication_rejected(self):
        with pytest.raises(ExprSyntaxError):
            parse_expr("2z")

    def test_error_carries_position(self):
        with pytest.raises(ExprSyntaxError) as err:
            parse_expr("z + (1")
        assert err.value.position == 6

    def test_whitespace_insignificant(self):
        assert parse_expr(" z ^ 2 +  i * z ") == parse_expr("z^2+i*z")

    def test_unary_minus_folds_into_literal(self):
        assert parse_expr("-2.5") == Const(-2.5)
        assert parse_expr("-i") == Const(-1j)
        assert parse_expr("-z") == Prod(Const(-1.0), Var())

    @pytest.mark.parametrize("text", CORPUS)
    def test_print_parse_round_trip(self, text):
        tree = parse_expr(text)
        assert parse_expr(to_source(tree)) == tree

    def test_double_round_trip_is_stable(self):
        for text in CORPUS:
            once = to_source(parse_expr(text))
            assert to_source(parse_expr(once)) == once


class TestEvaluate:
    def test_square_at_two(self):
        assert evaluate(HoloFunction.from_text("z^2"), 2.0) == 4.0

    def test_exp_at_zero(self):
        assert evaluate(HoloFunction.from_text("exp(z)"), 0.0) == 1.0

    def test_pole_is_singular(self):
        with pytest.raises(SingularityError):
            evaluate(HoloFunction.from_text("1/(1-z)"), 1.0)

    def test_log_of_zero_is_singular(self):
        with pytest.raises(SingularityError):
            evaluate(HoloFunction.from_text("log(z)"), 0.0)


class TestJets:
    def test_cube_jet_at_two(self):
        jet = eval_jet(HoloFunction.from_text("z^3"), 2.0, 2)
        assert jet.coeffs == pytest.approx((8.0, 12.0, 6.0))

    def test_exp_taylor_coefficients(self):
        jet = eval_jet(HoloFunction.from_text("exp(z)"), 0.0, 4)
        assert jet.coeffs == pytest.approx(
            (1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0))

    def test_identity_jet(self):
        jet = eval_jet(HoloFunction.from_text("z"), 0.3 + 0.4j, 1)
        assert jet.coeffs == pytest.approx((0.3 + 0.4j, 1.0))

    def test_derivative_of_cube(self):
        assert derivative(HoloFunction.from_text("z^3"), 2.0, 2) == pytest.approx(12.0)

    @pytest.mark.parametrize("k", [0, 1, 2, 5, 9])
    def test_exp_all_derivatives_equal_one(self, k):
        assert derivative(HoloFunction.from_text("exp(z)"), 0.0, k) == pytest.approx(1.0)

    def test_half_square_second_derivative(self):
        assert derivative(HoloFunction.from_text("z^2/2"), 0.0, 2) == pytest.approx(1.0)

    def test_jet_requires_matching_base(self):
        a = Jet(0.0, 1, (1.0, 2.0))
        b = Jet(1.0, 1, (1.0, 2.0))
        with pytest.raises(ValueError):
            _ = a + b

    def test_jet_requires_matching_order(self):
        a = Jet(0.0, 1, (1.0, 2.0))
        b = Jet(0.0, 2, (1.0, 2.0, 3.0))
        with pytest.raises(ValueError):
            _ = a * b

    def test_jet_length_invariant(self):
        with pytest.raises(ValueError):
            Jet(0.0, 2, (1.0, 2.0))


class TestDerivativeFidelity:
    def test_first_derivative_matches_finite_differences(self, rng):
        for text in CATALOG_EXPRS:
            func = HoloFunction.from_text(text)
            z = disk_points(rng, 100, r_max=0.85)
            jet_d, ok = func.derivative_many(z, 1)
            fd, ok_fd = central_diff(func.evaluate_many, z)
            use = ok & ok_fd
            assert use.sum() >= 95
            assert np.max(rel_err(fd[use], jet_d[use])) <= 1e-6

    def test_product_rule_is_cauchy_product(self, rng):
        pairs = [("z^2/2", "exp(z)"), ("sin(z)", "cos(z)"),
                 ("(z+0.5)/(1+0.5*z)", "z^3"), ("exp(i/(1-z))", "z^2")]
        for a_text, b_text in pairs:
            fa = HoloFunction.from_text(a_text)
            fb = HoloFunction.from_text(b_text)
            prod = HoloFunction(Prod(fa.expr, fb.expr))
            for z0 in disk_points(rng, 5, r_max=0.7):
                k = 6
                ja = eval_jet(fa, z0, k)
                jb = eval_jet(fb, z0, k)
                jp = eval_jet(prod, z0, k)
                expected = cauchy_product(ja.coeffs, jb.coeffs)
                assert np.max(np.abs(np.array(jp.coeffs)
                                     - np.array(expected))) < 1e-12

    def test_jet_mul_agrees_with_tape(self, rng):
        fa = HoloFunction.from_text("sin(z)")
        fb = HoloFunction.from_text("exp(z^2)")
        prod = HoloFunction(Prod(fa.expr, fb.expr))
        z0 = 0.3 - 0.2j
        jet = eval_jet(fa, z0, 5) * eval_jet(fb, z0, 5)
        tape_jet = eval_jet(prod, z0, 5)
        assert np.allclose(jet.coeffs, tape_jet.coeffs, atol=1e-13)


class TestVectorizedPaths:
    def test_singular_points_masked_not_raised(self):
        func = HoloFunction.from_text("1/(1-z)")
        values, ok = func.evaluate_many(np.array([0.0, 1.0, 0.5]))
        assert ok.tolist() == [True, False, True]
        assert np.isnan(values[1].real)
        assert values[2] == pytest.approx(2.0)

    def test_sin_cos_jets_match_analytic(self):
        func = HoloFunction.from_text("sin(z)")
        jet = eval_jet(func, 0.0, 5)
        assert jet.coeffs == pytest.approx(
            (0.0, 1.0, 0.0, -1.0 / 6.0, 0.0, 1.0 / 120.0), abs=1e-15)

    def test_log_jet_matches_analytic(self):
        func = HoloFunction.from_text("log(z)")
        jet = eval_jet(func, 2.0, 3)
        # log(2+h) = log 2 + h/2 - h^2/8 + h^3/24
        assert jet.coeffs == pytest.approx(
            (math.log(2.0), 0.5, -0.125, 1.0 / 24.0))
