import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from heinzlab.quadrature import (
    GAUSS_WEIGHTS,
    KRONROD_WEIGHTS,
    NODES,
    QuadratureConfig,
    QuadratureError,
    integrate_matrix,
    integrate_matrix_with_error,
    integrate_scalar,
)


class TestRule:
    def test_gauss_part_matches_legendre(self):
        x, w = np.polynomial.legendre.leggauss(7)
        mask = GAUSS_WEIGHTS > 0
        np.testing.assert_allclose(NODES[mask], x, atol=1e-15)
        np.testing.assert_allclose(GAUSS_WEIGHTS[mask], w, atol=1e-15)

    def test_symmetry_and_weight_sums(self):
        np.testing.assert_allclose(NODES, -NODES[::-1], atol=0)
        assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
        assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)

    @pytest.mark.parametrize("k", range(0, 24))
    def test_kronrod_exact_to_degree_23(self, k):
        exact = 0.0 if k % 2 else 2.0 / (k + 1)
        assert KRONROD_WEIGHTS @ NODES**k == pytest.approx(exact, abs=1e-14)

    @pytest.mark.parametrize("k", range(0, 14))
    def test_gauss_exact_to_degree_13(self, k):
        exact = 0.0 if k % 2 else 2.0 / (k + 1)
        assert GAUSS_WEIGHTS @ NODES**k == pytest.approx(exact, abs=1e-14)


class TestScalar:
    def test_closed_forms(self):
        assert integrate_scalar(math.exp, 0, 1)[0] == pytest.approx(math.e - 1, rel=1e-13)
        assert integrate_scalar(math.sin, 0, math.pi)[0] == pytest.approx(2.0, rel=1e-13)
        assert integrate_scalar(lambda x: 1 / (1 + x * x), -10, 10)[0] == pytest.approx(2 * math.atan(10), rel=1e-12)

    def test_vectorized_agrees(self):
        a = integrate_scalar(np.cos, 0.0, 3.0, vectorized=True)[0]
        b = integrate_scalar(math.cos, 0.0, 3.0)[0]
        assert a == pytest.approx(b, rel=1e-14)

    @given(st.floats(-3, 3), st.floats(0.01, 4), st.floats(0.1, 5))
    def test_against_scipy(self, a, width, k):
        f = lambda x: np.exp(k * np.sin(x)) * np.abs(x - a - width / 3)
        b = a + width
        got, err = integrate_scalar(f, a, b, vectorized=True)
        ref = integrate.quad(f, a, b, points=[a + width / 3], epsabs=1e-13, epsrel=1e-13)[0]
        assert got == pytest.approx(ref, rel=1e-9, abs=1e-10)
        assert err <= max(1e-10, 1e-10 * abs(got))

    def test_degenerate_interval(self):
        assert integrate_scalar(math.exp, 2.0, 2.0) == (0.0, 0.0)

    def test_reversed_limits_rejected(self):
        with pytest.raises(ValueError):
            integrate_scalar(math.exp, 1.0, 0.0)

    def test_nonfinite_integrand(self):
        with pytest.raises(ValueError):
            integrate_scalar(lambda x: math.inf, 0.0, 1.0)

    def test_budget_exhausted_carries_estimate(self):
        cfg = QuadratureConfig(max_subdivisions=3)
        with pytest.raises(QuadratureError) as info:
            integrate_scalar(lambda x: x**-0.9, 0.0, 1.0, cfg, vectorized=True)
        assert info.value.err_estimate > 0
        assert np.isfinite(info.value.value)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            QuadratureConfig(abs_tol=0)
        with pytest.raises(ValueError):
            QuadratureConfig(max_subdivisions=0)
        with pytest.raises(ValueError):
            QuadratureConfig(base_rule_points=21)

    def test_bad_vectorized_shape(self):
        with pytest.raises(ValueError):
            integrate_scalar(lambda x: np.ones(3), 0.0, 1.0, vectorized=True)


class TestMatrix:
    def test_entrywise_closed_form(self):
        lam = np.array([[0.5, 1.0], [2.0, 3.0]])
        g = lambda t: np.exp(t * lam)
        got = integrate_matrix(g, 0.0, 1.0)
        np.testing.assert_allclose(got, np.expm1(lam) / lam, rtol=1e-13)

    def test_vectorized_stack(self):
        M = np.array([[1.0, 2j], [0.0, -1.0]])
        g = lambda t: np.asarray(t)[:, None, None] ** 2 * M
        value, err = integrate_matrix_with_error(g, -1.0, 2.0, vectorized=True)
        np.testing.assert_allclose(value, 3.0 * M, rtol=1e-14)
        assert err < 1e-12

    def test_requires_matrix(self):
        with pytest.raises(ValueError):
            integrate_matrix(lambda t: t, 0.0, 1.0)

    def test_shape_change_rejected(self):
        calls = []

        def g(t):
            calls.append(t)
            return np.eye(2) if len(calls) <= 15 else np.eye(3)

        with pytest.raises(ValueError):
            integrate_matrix(lambda t: g(t) * np.exp(50 * t), 0.0, 1.0)

    def test_zero_interval_shape(self):
        assert integrate_matrix(lambda t: np.ones((2, 3)), 1.0, 1.0).shape == (2, 3)
