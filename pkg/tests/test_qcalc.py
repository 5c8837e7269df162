import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpeano.exceptions import JacksonConvergenceWarning, QDomainError, SignChangeError
from qpeano.funcrep import Builtin, PiecewisePolynomial, Polynomial
from qpeano.qarith import q_int
from qpeano.qcalc import (
    IntegralConfig,
    holder_check,
    jackson_integral_0b,
    jackson_integral_ab,
    mean_value_xi,
    q_derivative,
    q_derivative_n,
    q_norm,
    solve_level,
)

bases = st.floats(0.05, 0.95)
coeffs = st.lists(st.floats(-5, 5), min_size=1, max_size=7)


def black(p):
    """Hide a polynomial from the closed-form paths."""
    return lambda x: p(x)


class TestDerivative:
    def test_examples(self):
        x2 = Polynomial([0, 0, 1])
        assert q_derivative(x2, 3.0, 2) == 9.0
        assert q_derivative(black(x2), 3.0, 2) == 9.0
        assert q_derivative(x2, 0.0, 2) == 0.0
        assert q_derivative_n(Polynomial([0, 0, 0, 1]), 1.5, 3, 2) == pytest.approx(q_int(3, 2) * q_int(2, 2))

    def test_degree_drops(self):
        p = Polynomial([1, 2, 3])
        assert q_derivative_n(p, 0.7, 3, 1.7) == 0.0
        assert q_derivative_n(black(p), 0.7, 3, 1.7) == pytest.approx(0.0, abs=1e-12)

    def test_errors(self):
        with pytest.raises(QDomainError):
            q_derivative(Builtin("exp"), 0.0, 2)
        with pytest.raises(QDomainError):
            q_derivative(Polynomial([1]), 1.0, 1.0)
        with pytest.raises(QDomainError):
            q_derivative_n(Polynomial([1]), 1.0, -1, 2)

    def test_black_box_matches_coefficient_rule(self):
        p = Polynomial([0.3, -1, 2, 0.5])
        t = np.array([-1.3, 0.4, 2.0])
        np.testing.assert_allclose(q_derivative_n(black(p), t, 2, 1.5), q_derivative_n(p, t, 2, 1.5), rtol=1e-10)

    @pytest.mark.parametrize("name,deriv", [("exp", np.exp), ("sin", np.cos), ("cos", lambda t: -np.sin(t))])
    def test_classical_limit(self, name, deriv):
        rng = np.random.default_rng(7)
        t = rng.uniform(-3, 3, size=50)
        t = t[np.abs(t) > 1e-3]
        got = q_derivative(Builtin(name), t, 1 + 1e-6)
        assert np.all(np.abs(got - deriv(t)) <= 1e-4 * (1 + np.abs(deriv(t))))


class TestJackson:
    @pytest.mark.parametrize("k,expected", [(0, 1.0), (1, 2 / 3), (2, 4 / 7)])
    def test_monomials_base_half(self, k, expected):
        mono = Builtin("monomial", {"k": k})
        assert jackson_integral_0b(mono, 1.0, 0.5) == pytest.approx(expected, rel=1e-14)
        assert jackson_integral_0b(Polynomial([0] * k + [1]), 1.0, 0.5) == pytest.approx(expected, rel=1e-15)

    def test_ab_examples(self):
        assert jackson_integral_ab(Builtin("exp"), 0.7, 0.7, 0.5) == 0.0
        x2 = Polynomial([0, 0, 1])
        assert jackson_integral_ab(x2, 0, 1, 0.5) == pytest.approx(4 / 7)
        # D_{1/2} x^2 = [2]_{1/2} x
        Df = Polynomial([0, q_int(2, 0.5)])
        assert jackson_integral_ab(Df, 1, 2, 0.5) == pytest.approx(3.0, rel=1e-15)
        assert jackson_integral_ab(black(Df), 1, 2, 0.5) == pytest.approx(3.0, rel=1e-13)
        assert jackson_integral_ab(x2, 2, 1, 0.5) == -jackson_integral_ab(x2, 1, 2, 0.5)

    def test_negative_endpoint_is_odd_extension(self):
        f = Builtin("exp")
        assert jackson_integral_0b(f, -1.0, 0.5) == pytest.approx(
            -jackson_integral_0b(lambda x: np.exp(-x), 1.0, 0.5), rel=1e-14
        )

    def test_base_validation(self):
        for bad in (1.0, 2.0, 0.0):
            with pytest.raises(QDomainError):
                jackson_integral_0b(Polynomial([1]), 1.0, bad)

    def test_infinite_endpoint_refused(self):
        with pytest.raises(QDomainError):
            jackson_integral_0b(Polynomial([1]), math.inf, 0.5)
        with pytest.raises(QDomainError):
            jackson_integral_ab(Builtin("exp"), 0.0, math.inf, 0.5)

    def test_non_convergence_warns(self):
        cfg = IntegralConfig(rel_tol=1e-14, max_terms=10)
        with pytest.warns(JacksonConvergenceWarning):
            res = jackson_integral_0b(Builtin("exp"), 1.0, 0.9, cfg, full_output=True)
        assert not res.converged
        assert res.terms == 10

    def test_converged_flag(self):
        res = jackson_integral_0b(Builtin("exp"), 1.0, 0.5, full_output=True)
        assert res.converged
        assert 0 < res.terms < 100

    def test_survives_isolated_zeros(self):
        # vanishes at the first sample points; the three-term rule keeps going
        f = PiecewisePolynomial([0.0, 0.2, 1.0], [[1.0], [0.0]])
        expected = sum((1 - 0.5) * 0.5**i for i in range(3, 200))
        assert jackson_integral_0b(f, 1.0, 0.5) == pytest.approx(expected, rel=1e-13)

    @given(coeffs, st.floats(-3, 3), st.floats(-3, 3), bases)
    def test_fundamental_theorem(self, c, a, b, base):
        F = Polynomial(c)
        DF = F.q_derivative(base)
        got = jackson_integral_ab(DF, a, b, base)
        scale = sum(abs(ck) * (abs(a) ** k + abs(b) ** k) for k, ck in enumerate(c))
        assert abs(got - (F(b) - F(a))) <= 1e-10 * max(scale, 1e-300)

    @settings(max_examples=50)
    @given(coeffs, st.floats(-3, 3), st.floats(0.2, 0.8))
    def test_fundamental_theorem_series(self, c, b, base):
        F = Polynomial(c)
        DF = F.q_derivative(base)
        got = jackson_integral_0b(black(DF), b, base)
        scale = sum(abs(ck) * abs(b) ** k for k, ck in enumerate(c))
        assert abs(got - (F(b) - F(0))) <= 1e-10 * max(scale, 1e-300)

    @given(st.integers(0, 8), st.floats(0.1, 4), bases)
    def test_monomial_law(self, n, b, base):
        expected = b ** (n + 1) / q_int(n + 1, base)
        got = jackson_integral_0b(Builtin("monomial", {"k": n}), b, base)
        assert got == pytest.approx(expected, rel=1e-10)

    @settings(max_examples=50)
    @given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), bases)
    def test_linearity(self, alpha, a, b, base):
        f, g = Builtin("exp"), Builtin("sin")
        lhs = jackson_integral_ab(lambda x: alpha * f(x) + g(x), a, b, base)
        fa, ga = jackson_integral_ab(f, a, b, base), jackson_integral_ab(g, a, b, base)
        scale = abs(alpha * fa) + abs(ga)
        assert abs(lhs - (alpha * fa + ga)) <= 1e-12 * max(scale, 1.0)


class TestNorms:
    def test_examples(self):
        assert q_norm(Polynomial([1]), 1, 1, 2) == pytest.approx(1.0)
        assert q_norm(Polynomial([0, 1]), 1, 2, 2) == pytest.approx(math.sqrt(4 / 7))
        assert q_norm(Polynomial([0, 1]), 1, math.inf, 2) == 1.0

    def test_sup_includes_breakpoints(self):
        bump = PiecewisePolynomial([0.0, 0.3, 0.31, 1.0], [[0.0], [5.0], [0.0]])
        assert q_norm(bump, 1.0, math.inf, 2) == 5.0

    def test_errors(self):
        with pytest.raises(QDomainError):
            q_norm(Polynomial([1]), 1, 2, 0.5)
        with pytest.raises(QDomainError):
            q_norm(Polynomial([1]), 0.0, 2, 2)
        with pytest.raises(QDomainError):
            q_norm(Polynomial([1]), 1.0, 0.5, 2)


class TestHolder:
    def test_examples(self):
        one, x = Polynomial([1]), Polynomial([0, 1])
        assert holder_check(one, one, 1, 2, 2, 2) == pytest.approx((1.0, 1.0))
        lhs, rhs = holder_check(x, one, 1, 2, 2, 2)
        assert lhs == pytest.approx(2 / 3)
        assert rhs == pytest.approx(math.sqrt(4 / 7))
        assert holder_check(x, x, 1, 2, 2, 2) == pytest.approx((4 / 7, 4 / 7))

    def test_exponent_mismatch(self):
        with pytest.raises(QDomainError):
            holder_check(Polynomial([1]), Polynomial([1]), 1, 2, 3, 2)
        with pytest.raises(QDomainError):
            holder_check(Polynomial([1]), Polynomial([1]), 1, 1, math.inf, 2)

    @settings(max_examples=60)
    @given(coeffs, coeffs, st.floats(0.1, 3), st.sampled_from([(2, 2), (3, 1.5), (1.25, 5)]), st.floats(1.1, 4))
    def test_inequality(self, c1, c2, x, ps, q):
        p1, p2 = ps
        lhs, rhs = holder_check(Polynomial(c1), Polynomial(c2), x, p1, p2, q)
        assert lhs <= rhs + 1e-10 * max(1.0, rhs)


class TestMeanValue:
    def test_examples(self):
        xi = mean_value_xi(Polynomial([0, 1]), Polynomial([1]), 0, 1, 2)
        assert xi == pytest.approx(2 / 3, abs=1e-10)
        xi = mean_value_xi(Polynomial([1]), Polynomial([0, 1]), 0, 1, 2)
        assert xi is not None and 0 < xi < 1

    def test_sign_change(self):
        with pytest.raises(SignChangeError):
            mean_value_xi(Polynomial([0, 1]), Polynomial([-0.5, 1]), 0, 1, 2)

    def test_level_not_reached(self):
        assert solve_level(Polynomial([0, 1]), 5.0, 0, 1) is None

    def test_monotone_unique(self):
        F = Builtin("exp")
        xi = mean_value_xi(F, Polynomial([0, 0, 1]), 0.5, 2.0, 3)
        grid = np.linspace(0.5, 2.0, 1025)
        target = float(F(xi))
        assert np.count_nonzero(np.diff(np.sign(F(grid) - target))) <= 1
