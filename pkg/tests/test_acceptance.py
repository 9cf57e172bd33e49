"""Acceptance criteria 1-10, each at its stated tolerance.

Every test appends one ``ACCEPTANCE k: PASS|FAIL ...`` line, which the
conftest hook prints in a summary section at the end of the run.
"""

import math
import time

import mpmath as mp
import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from heinzlab import hh
from heinzlab.chains import PUBLISHED_DIGITS_TOL, PUBLISHED_LHS, PUBLISHED_RHS, VIOLATED, falsify_r0_generalization
from heinzlab.harness import DEFAULT_DIMS, DEFAULT_NORMS, SuiteConfig, instance_seed, make_instance, run_suite
from heinzlab.heinz import HeinzInstance, HeinzProfile, heinz_integral, hk_one_sided_integral
from heinzlab.linalg import KernelMatrixSpec, kernel_matrix, random_instance
from heinzlab.norms import NormKind, parse_norm, unorm
from heinzlab.rng import SplitMix64, derive_seed

NORMS = [parse_norm(t) for t in DEFAULT_NORMS]
CHAIN_SUITE = ("T3.1", "T3.2", "T3.3", "T3.4", "T3.5", "T3.6", "C4.2a", "C4.2b", "C4.3", "K-r0", "T4.5",
               "C4.6", "C4.7", "HK")


def record(k: int, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE {k}: {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def population(i: int):
    """Instance ``i`` of the standard seeded population (seed 0)."""
    dim = DEFAULT_DIMS[i % len(DEFAULT_DIMS)]
    norm = NORMS[(i // len(DEFAULT_DIMS)) % len(NORMS)]
    return HeinzProfile(make_instance(instance_seed(0, i), dim, norm))


def test_1_counterexample():
    start = time.perf_counter()
    report = falsify_r0_generalization()
    elapsed = time.perf_counter() - start
    lhs, rhs = report.values
    lhs_ok = abs(lhs - PUBLISHED_LHS) <= PUBLISHED_DIGITS_TOL
    rhs_ok = abs(rhs - PUBLISHED_RHS) <= PUBLISHED_DIGITS_TOL
    ok = lhs_ok and rhs_ok and lhs > rhs and report.verdict == VIOLATED and elapsed < 1.0
    record(1, ok, f"lhs={lhs:.4f} (|d|={abs(lhs - PUBLISHED_LHS):.3f}) rhs={rhs:.4f} "
                  f"(|d|={abs(rhs - PUBLISHED_RHS):.3f}) lhs>rhs={lhs > rhs} time={elapsed:.3f}s")


def test_2_midpoint_integral_suite():
    start = time.perf_counter()
    result = run_suite(SuiteConfig(trials=200, theorems=("T4.1",)))
    elapsed = time.perf_counter() - start
    worst = min(e.report.worst_margin / e.report.max_term for e in result.entries)
    params_ok = all(
        -0.5 <= e.report.params["alpha"] <= 1.5
        and -0.5 <= e.report.params["beta"] <= 1.5
        and abs(e.report.params["beta"] - e.report.params["alpha"]) >= 0.05
        for e in result.entries
    )
    ok = len(result.entries) == 200 and worst >= -1e-8 and params_ok and elapsed < 60
    record(2, ok, f"{len(result.entries)} instances, worst relative margin {worst:+.3e}, "
                  f"params in range={params_ok}, time={elapsed:.1f}s")


def test_3_full_chain_suite():
    start = time.perf_counter()
    result = run_suite(SuiteConfig(trials=200, theorems=CHAIN_SUITE))
    elapsed = time.perf_counter() - start
    violated = {}
    for e in result.entries:
        if e.report.verdict == VIOLATED:
            violated[e.theorem_id] = violated.get(e.theorem_id, 0) + 1
    ok = not violated and elapsed < 300
    detail = ", ".join(f"{tid}={n}" for tid, n in violated.items()) or "none"
    record(3, ok, f"{len(result.entries)} reports, violated: {detail}, time={elapsed:.1f}s")


def _mp_heinz_antiderivative(lam, mu, alpha, beta):
    lam, mu = mp.mpf(lam), mp.mpf(mu)
    if lam == mu:
        return 2 * lam * (mp.mpf(beta) - alpha)
    r = mp.log(lam / mu)
    # int lam^nu mu^(1-nu) + lam^(1-nu) mu^nu dnu = (mu e^(nu r) - lam e^(-nu r)) / r
    g = lambda nu: (mu * mp.exp(nu * r) - lam * mp.exp(-nu * r)) / r
    return g(mp.mpf(beta)) - g(mp.mpf(alpha))


def _mp_log_mean(a, b):
    a, b = mp.mpf(a), mp.mpf(b)
    return a if a == b else (a - b) / (mp.log(a) - mp.log(b))


def test_4_integral_oracles():
    mp.mp.dps = 30
    worst = 0.0
    for seed in range(50):
        rng = SplitMix64(derive_seed(4, seed))
        n = rng.integer(1, 5)
        lam = np.array([rng.log_uniform(1e-2, 1e2) for _ in range(n)])
        mu = np.array([rng.log_uniform(1e-2, 1e2) for _ in range(n)])
        if seed % 5 == 0:
            mu[0] = lam[0]
        X = random_instance(n, derive_seed(4, seed, 1))
        a, b = rng.uniform(-0.5, 1.5), rng.uniform(-0.5, 1.5)
        alpha, beta = min(a, b), max(a, b)
        inst = HeinzInstance(np.diag(lam), np.diag(mu), X, NormKind.trace())
        got_int = heinz_integral(inst, alpha, beta)
        got_hk = hk_one_sided_integral(inst)
        for i in range(n):
            for j in range(n):
                x = complex(X[i, j])
                ref_int = x * complex(_mp_heinz_antiderivative(lam[i], mu[j], alpha, beta))
                ref_hk = x * complex(_mp_log_mean(lam[i], mu[j]))
                worst = max(worst, abs(got_int[i, j] - ref_int) / abs(ref_int), abs(got_hk[i, j] - ref_hk) / abs(ref_hk))
    record(4, worst <= 1e-9, f"50 diagonal instances, worst entrywise relative error {worst:.2e}")


def test_5_scalar_golden_values():
    f = hh.convex(lambda x: x * x, label="x^2")
    x1, y1 = hh.xy_sequences(f, 0.0, 1.0, 1)
    low, high = hh.far_bounds(f, 0.0, 1.0, 0.5)
    got = {
        "m_f": (hh.mean_value(f, 0.0, 1.0), 1 / 3),
        "H_1/2": (hh.ht(f, 0.0, 1.0, 0.5), 13 / 48),
        "x_1": (x1, 5 / 16),
        "y_1": (y1, 3 / 8),
        "l(1/2)": (low, 5 / 16),
        "L(1/2)": (high, 3 / 8),
        "xi": (hh.find_xi(f, 0.0, 1.0), 1 / math.sqrt(3)),
    }
    errs = {k: abs(v - ref) for k, (v, ref) in got.items()}
    worst = max(errs, key=errs.get)
    record(5, all(e <= 1e-10 for e in errs.values()), f"worst {worst} error {errs[worst]:.2e}")


def test_6_unitary_invariance():
    worst = 0.0
    for k, norm in enumerate(NORMS):
        for seed in range(50):
            s = derive_seed(6, k, seed)
            n = 2 + seed % 5
            U = random_instance(n, derive_seed(s, 1), "unitary")
            V = random_instance(n, derive_seed(s, 2), "unitary")
            X = random_instance(n, derive_seed(s, 3))
            base = unorm(X, norm)
            worst = max(worst, abs(unorm(U @ X @ V, norm) - base) / base)
    record(6, worst <= 1e-10, f"5 norm kinds x 50 triples, worst relative deviation {worst:.2e}")


def test_7_kernel_positivity():
    worst = math.inf
    count = 0
    for seed in range(100):
        rng = SplitMix64(derive_seed(7, seed))
        n = rng.integer(1, 8)
        lam = tuple(rng.log_uniform(1e-2, 1e2) for _ in range(n))
        c = rng.uniform(0.05, 2.0)
        specs = [KernelMatrixSpec("loewner-log", lam, c=c), KernelMatrixSpec("tanh-ratio", lam, c=c)]
        specs += [KernelMatrixSpec("w-theorem45", lam, nu=nu) for nu in (0.0, 0.1, 0.25, 0.4, 0.5)]
        for spec in specs:
            w = np.linalg.eigvalsh(kernel_matrix(spec))
            scale = np.abs(w).max()
            worst = min(worst, w[0] / scale)
            count += 1
    record(7, worst >= -1e-10, f"{count} kernel matrices, worst min-eigenvalue / spectral norm {worst:+.2e}")


def test_8_profile_symmetry_and_convexity():
    grid = np.linspace(0.0, 1.0, 21)
    worst_sym = worst_cvx = 0.0
    for i in range(100):
        F = population(i).F(grid)
        scale = F.max()
        worst_sym = max(worst_sym, np.abs(F - F[::-1]).max() / scale)
        worst_cvx = max(worst_cvx, (F[1:-1] - 0.5 * (F[:-2] + F[2:])).max() / scale)
    ok = worst_sym <= 1e-10 and worst_cvx <= 1e-10
    record(8, ok, f"100 instances, worst symmetry {worst_sym:.2e}, worst midpoint defect {worst_cvx:+.2e}")


def test_9_monotonicity():
    ts = np.linspace(0.0, 1.0, 11)
    functions = [(hh.convex(lambda x: x * x, label="x^2"), 0.0, 1.0), (hh.convex(np.exp, label="exp"), 0.0, 1.0)]
    functions += [(population(i).as_convex_fn(0.0, 1.0), 0.0, 1.0) for i in range(10)]
    worst = -math.inf
    for f, a, b in functions:
        for name, fn in (("H", hh.ht), ("G", hh.gt)):
            seq = np.array([fn(f, a, b, t) for t in ts])
            worst = max(worst, (-np.diff(seq)).max() / np.abs(seq).max())
        seq = np.array([hh.tt(f, a, b, t) for t in ts])
        worst = max(worst, (-np.diff(seq)).max() / np.abs(seq).max())
    record(9, worst <= 1e-10, f"{len(functions)} functions x (H_t, G_t, T_t), worst relative decrease {worst:+.2e}")


def test_10_vasic_lackovic_only_if():
    f = hh.convex(np.exp, label="exp")
    _, _, _, y_max = hh.vasic_lackovic(f, 0.0, 1.0, 1.0, 2.0, 0.1)
    _, mid_in, rhs_in, _ = hh.vasic_lackovic(f, 0.0, 1.0, 1.0, 2.0, 0.95 * y_max)
    _, mid_out, rhs_out, _ = hh.vasic_lackovic(f, 0.0, 1.0, 1.0, 2.0, 1.05 * y_max)
    holds_inside = mid_in <= rhs_in
    fails_outside = mid_out > rhs_out
    record(10, holds_inside and fails_outside,
           f"y_max={y_max:.6f}; at 0.95 y_max mid-rhs={mid_in - rhs_in:+.3e}; "
           f"at 1.05 y_max mid-rhs={mid_out - rhs_out:+.3e} (needs > 0)")
