import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from heinzlab.chains import COUNTEREXAMPLE_A, COUNTEREXAMPLE_B, COUNTEREXAMPLE_X, counterexample_instance
from heinzlab.harness import make_instance
from heinzlab.heinz import (
    F_value,
    HeinzInstance,
    HeinzProfile,
    heinz_integral,
    heinz_scalar,
    heinz_term,
    heinz_term_direct,
    hk_one_sided_integral,
    log_mean,
)
from heinzlab.hh import convexity_probe
from heinzlab.linalg import NotPositiveDefiniteError, fractional_power, random_instance
from heinzlab.norms import NormKind, parse_norm, unorm

NORMS = [parse_norm(t) for t in ("tr", "fro", "op", "sch:3", "kyfan:2")]
seeds = st.integers(0, 2**32)


def seeded_profile(seed, n, norm=NormKind.trace()):
    return HeinzProfile(make_instance(seed, n, norm))


def test_heinz_scalar_examples():
    assert heinz_scalar(2, 8, 0) == pytest.approx(5.0)
    assert heinz_scalar(2, 8, 1) == pytest.approx(5.0)
    assert heinz_scalar(4, 9, 0.5) == pytest.approx(6.0)
    assert heinz_scalar(1, 16, 0.25) == pytest.approx(5.0)
    with pytest.raises(ValueError):
        heinz_scalar(0, 1, 0.5)


@given(st.floats(0.01, 100), st.floats(0.01, 100), st.floats(0, 1))
def test_heinz_scalar_symmetry_and_bounds(a, b, nu):
    h = heinz_scalar(a, b, nu)
    assert h == pytest.approx(heinz_scalar(a, b, 1 - nu), rel=1e-14)
    assert h == pytest.approx(heinz_scalar(b, a, nu), rel=1e-14)
    assert math.sqrt(a * b) * (1 - 1e-14) <= h <= 0.5 * (a + b) * (1 + 1e-14)


def test_log_mean_values():
    assert log_mean(1, 1) == 1
    assert log_mean(1, math.e) == pytest.approx(math.e - 1, rel=1e-15)
    assert log_mean(2, 2 * (1 + 1e-12)) == pytest.approx(2 * (1 + 0.5e-12), rel=1e-15)
    with pytest.raises(ValueError):
        log_mean(-1, 2)


@given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
def test_log_mean_against_mpmath(a, b):
    if a == b:
        return
    ref = (mp.mpf(a) - b) / (mp.log(a) - mp.log(b))
    assert log_mean(a, b) == pytest.approx(float(ref), rel=1e-12)
    assert math.sqrt(a * b) * (1 - 1e-14) <= log_mean(a, b) <= 0.5 * (a + b) * (1 + 1e-14)


class TestHeinzTerm:
    def test_diagonal_example(self):
        inst = HeinzInstance(np.diag([1.0, 4.0]), np.diag([9.0, 16.0]), np.ones((2, 2)), NormKind.trace())
        T = heinz_term(inst, 0.25)
        assert T[0, 0].real == pytest.approx(9**0.75 + 9**0.25, rel=1e-14)
        assert T[0, 0].real == pytest.approx(6.92820, abs=1e-5)
        lam, mu = np.array([1.0, 4.0]), np.array([9.0, 16.0])
        ref = lam[:, None] ** 0.25 * mu[None, :] ** 0.75 + lam[:, None] ** 0.75 * mu[None, :] ** 0.25
        np.testing.assert_allclose(T, ref, rtol=1e-14)

    def test_identity_gives_twice_x(self):
        X = random_instance(3, 5)
        inst = HeinzInstance(np.eye(3), np.eye(3), X, NormKind.frobenius())
        for nu in (0.0, 0.3, 1.7):
            np.testing.assert_allclose(heinz_term(inst, nu), 2 * X, atol=1e-14)
        assert F_value(HeinzProfile(inst), 0.4) == pytest.approx(2 * unorm(X, NormKind.frobenius()))

    def test_half_is_twice_geometric(self):
        inst = make_instance(3, 4, NormKind.trace())
        Ah = fractional_power(inst.A, 0.5).matrix
        Bh = fractional_power(inst.B, 0.5).matrix
        np.testing.assert_allclose(heinz_term(inst, 0.5), 2 * Ah @ inst.X @ Bh, atol=1e-12)

    @given(st.integers(1, 6), st.integers(1, 6), seeds, st.floats(-0.5, 1.5))
    def test_two_routes_agree(self, m, n, seed, nu):
        inst = HeinzInstance(
            random_instance(m, seed, "pd"), random_instance(n, seed + 1, "pd"),
            random_instance(m, seed + 2, n_cols=n), NormKind.trace(),
        )
        fast = heinz_term(inst, nu)
        ref = heinz_term_direct(inst, nu)
        assert np.abs(fast - ref).max() <= 1e-11 * np.abs(ref).max()

    def test_stacked_nu(self):
        P = seeded_profile(1, 3)
        nus = np.array([0.1, 0.6])
        stack = P.term(nus)
        for k, nu in enumerate(nus):
            np.testing.assert_allclose(stack[k], P.term(nu), atol=1e-13)
        np.testing.assert_allclose(P.F(nus), [P.F(0.1), P.F(0.6)])

    def test_power_term(self):
        P = seeded_profile(2, 3)
        A, B, X = P.instance.A, P.instance.B, P.instance.X
        np.testing.assert_allclose(P.power_term(1.0, 1.0), A.matrix @ X @ B.matrix, atol=1e-11)

    def test_instance_validation(self):
        with pytest.raises(ValueError):
            HeinzInstance(np.eye(2), np.eye(3), np.ones((3, 3)), NormKind.trace())
        with pytest.raises(NotPositiveDefiniteError):
            HeinzInstance(np.diag([1.0, 0.0]), np.eye(2), np.ones((2, 2)), NormKind.trace())
        inst = HeinzInstance(np.eye(2), np.eye(3), np.ones((2, 3)), NormKind.trace())
        assert not inst.is_square
        with pytest.raises(ValueError):
            inst.X[0, 0] = 3


class TestProfile:
    @given(seeds, st.integers(2, 6), st.sampled_from(NORMS))
    def test_symmetry(self, seed, n, norm):
        P = seeded_profile(seed, n, norm)
        grid = np.linspace(0, 1, 21)
        F = P.F(grid)
        np.testing.assert_allclose(F, F[::-1], rtol=1e-10)

    @given(seeds, st.integers(2, 6), st.sampled_from(NORMS))
    def test_convex_and_minimal_at_half(self, seed, n, norm):
        P = seeded_profile(seed, n, norm)
        f = P.as_convex_fn(0, 1)
        scale = P.F(0.0)
        assert convexity_probe(f, 0, 1) <= 1e-10 * scale
        grid = np.linspace(0, 1, 21)
        assert P.F(0.5) <= P.F(grid).min() + 1e-10 * scale

    @given(seeds, st.integers(2, 6), st.sampled_from(NORMS), st.floats(0, 1))
    def test_bhatia_davis_bounds(self, seed, n, norm, nu):
        P = seeded_profile(seed, n, norm)
        lo = 2 * P.geometric_term_norm()
        hi = P.arithmetic_term_norm()
        tol = 1e-10 * hi
        assert lo - tol <= P.F(nu) <= hi + tol

    def test_rectangular_profile(self):
        inst = HeinzInstance(random_instance(2, 1, "pd"), random_instance(4, 2, "pd"),
                             random_instance(2, 3, n_cols=4), NormKind.operator())
        P = HeinzProfile(inst)
        assert P.F(0.3) == pytest.approx(P.F(0.7), rel=1e-12)
        assert P.F(0.3) == pytest.approx(unorm(heinz_term_direct(inst, 0.3), NormKind.operator()), rel=1e-11)


def mp_diag_integral(lam, mu, alpha, beta):
    """``int_alpha^beta lam^nu mu^(1-nu) + lam^(1-nu) mu^nu dnu`` at 30 digits."""
    mp.mp.dps = 30
    lam, mu = mp.mpf(lam), mp.mpf(mu)
    f = lambda nu: lam**nu * mu ** (1 - nu) + lam ** (1 - nu) * mu**nu
    if lam == mu:
        return float(2 * lam * (beta - alpha))
    r = mp.log(lam / mu)
    one = mu * (mp.exp(beta * r) - mp.exp(alpha * r)) / r
    two = lam * (mp.exp(-beta * r) - mp.exp(-alpha * r)) / (-r)
    return one + two


class TestIntegrals:
    def test_identity_and_empty_interval(self):
        X = random_instance(3, 4)
        inst = HeinzInstance(np.eye(3), np.eye(3), X, NormKind.trace())
        np.testing.assert_allclose(heinz_integral(inst, -0.2, 0.9), 2 * 1.1 * X, atol=1e-13)
        np.testing.assert_array_equal(heinz_integral(inst, 0.4, 0.4), np.zeros((3, 3)))
        np.testing.assert_allclose(hk_one_sided_integral(inst), X, atol=1e-14)

    @pytest.mark.parametrize("seed", range(5))
    def test_diagonal_against_antiderivative(self, seed):
        rng = np.random.default_rng(seed)
        lam = rng.uniform(0.1, 10, 3)
        mu = rng.uniform(0.1, 10, 3)
        X = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        alpha, beta = -0.4, 1.3
        got = heinz_integral(HeinzInstance(np.diag(lam), np.diag(mu), X, NormKind.trace()), alpha, beta)
        for i in range(3):
            for j in range(3):
                ref = complex(X[i, j]) * float(mp_diag_integral(lam[i], mu[j], alpha, beta))
                assert abs(got[i, j] - ref) <= 1e-10 * abs(ref)

    def test_hk_diagonal_is_log_mean(self):
        lam = np.array([0.5, 2.0, 7.0])
        mu = np.array([1.0, 2.0, 3.0])
        X = np.arange(1, 10, dtype=float).reshape(3, 3)
        got = hk_one_sided_integral(HeinzInstance(np.diag(lam), np.diag(mu), X, NormKind.trace()))
        for i in range(3):
            for j in range(3):
                a, b = mp.mpf(lam[i]), mp.mpf(mu[j])
                L = a if a == b else (a - b) / (mp.log(a) - mp.log(b))
                assert got[i, j].real == pytest.approx(X[i, j] * float(L), rel=1e-12)

    @given(seeds, st.integers(2, 5), st.sampled_from(NORMS))
    def test_hk_chain(self, seed, n, norm):
        P = seeded_profile(seed, n, norm)
        mid = unorm(hk_one_sided_integral(P.instance), norm)
        tol = 1e-10 * P.arithmetic_term_norm()
        assert P.geometric_term_norm() - tol <= mid <= 0.5 * P.arithmetic_term_norm() + tol


def mp_trace_norm_counterexample(nu):
    """Both counterexample trace norms from real symmetric eigendecompositions at 30 digits."""
    mp.mp.dps = 30
    A, B, X = (mp.matrix(M.tolist()) for M in (COUNTEREXAMPLE_A, COUNTEREXAMPLE_B, COUNTEREXAMPLE_X))

    def power(M, p):
        w, Q = mp.eigsy(M)
        return Q * mp.diag([x**p for x in w]) * Q.T

    def trace_norm(M):
        return mp.fsum(mp.svd_r(M, compute_uv=False))

    nu = mp.mpf(nu)
    lhs = power(A, nu) * X * power(B, 1 - nu) + power(A, 1 - nu) * X * power(B, nu)
    r0 = min(nu, 1 - nu)
    rhs = 4 * r0 * power(A, mp.mpf(1) / 2) * X * power(B, mp.mpf(1) / 2) + (1 - 2 * r0) * (A * X + X * B)
    return float(trace_norm(lhs)), float(trace_norm(rhs))


def test_counterexample_profile_against_mpmath():
    lhs_ref, rhs_ref = mp_trace_norm_counterexample("0.468")
    P = HeinzProfile(counterexample_instance())
    assert P.F(0.468) == pytest.approx(lhs_ref, rel=1e-12)
    assert abs(P.F(0.468) - 78135.5) <= 0.5
    r0 = 0.468
    rhs = P.norm_of(4 * r0 * P.core(0.5, 0.5) + (1 - 2 * r0) * (P.core(1, 0) + P.core(0, 1)))
    assert rhs == pytest.approx(rhs_ref, rel=1e-12)
    assert P.F(0.468) > rhs
