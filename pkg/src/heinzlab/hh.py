"""Hermite-Hadamard refinement functionals for a convex function on ``[a, b]``.

Every functional takes a :class:`ConvexFn` and endpoints ``a <= b``. A
degenerate interval ``a == b`` returns ``f(a)`` (the continuity limit).
Integrals go through :mod:`heinzlab.quadrature`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .quadrature import DEFAULT_CONFIG, QuadratureConfig, _adaptive, integrate_scalar

XY_CAP = 20


@dataclass(frozen=True)
class ConvexFn:
    """A real function on ``[lo, hi]`` presumed convex.

    ``vectorized`` marks an ``eval`` that accepts and returns numpy arrays.
    Convexity is not checked here; see :func:`convexity_probe`.
    """

    eval: Callable
    lo: float = -math.inf
    hi: float = math.inf
    label: str = "f"
    vectorized: bool = False

    def __call__(self, x):
        if np.ndim(x) == 0:
            return float(self.eval(float(x)) if not self.vectorized else self.eval(np.array([x]))[0])
        x = np.asarray(x, dtype=float)
        if self.vectorized:
            return np.asarray(self.eval(x), dtype=float)
        return np.array([float(self.eval(float(xi))) for xi in x.ravel()]).reshape(x.shape)

    def check_interval(self, a: float, b: float) -> None:
        if a > b:
            raise ValueError(f"interval endpoints must satisfy a <= b, got ({a}, {b})")
        if a < self.lo or b > self.hi:
            raise ValueError(f"[{a}, {b}] is outside the domain [{self.lo}, {self.hi}] of {self.label}")


def convex(f: Callable, lo: float = -math.inf, hi: float = math.inf, label: str = "f", vectorized: bool = True):
    return ConvexFn(f, lo, hi, label, vectorized)


def _check_unit(name: str, t: float) -> None:
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {t}")


def _unit_mean(f: ConvexFn, a: float, b: float, cfg: QuadratureConfig, inner=lambda x: x) -> float:
    """``(1/(b-a)) int_a^b f(inner(x)) dx`` computed as ``int_0^1 f(inner([a, b]_u)) du``.

    Integrating over the unit parameter makes the absolute tolerance apply to
    the mean itself, independent of the interval length.
    """
    value, _ = integrate_scalar(lambda u: f(inner((1.0 - u) * a + u * b)), 0.0, 1.0, cfg, vectorized=True)
    return value


def affine_mix(a: float, b: float, t: float) -> float:
    """``[a, b]_t = (1 - t) a + t b``."""
    return (1.0 - t) * a + t * b


def mean_value(f: ConvexFn, a: float, b: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Integral mean ``m_f(a, b)``."""
    f.check_interval(a, b)
    if a == b:
        return f(a)
    return _unit_mean(f, a, b, cfg)


def f_ab(f: ConvexFn, a: float, b: float, t: float) -> float:
    """Symmetrised value ``(f(a + t(b-a)/2) + f(b - t(b-a)/2)) / 2``."""
    _check_unit("t", t)
    f.check_interval(a, b)
    h = 0.5 * t * (b - a)
    return 0.5 * (f(a + h) + f(b - h))


def ht(f: ConvexFn, a: float, b: float, t: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``H_t(a, b) = (1/(b-a)) int_a^b f([(a+b)/2, x]_t) dx``."""
    _check_unit("t", t)
    f.check_interval(a, b)
    if a == b:
        return f(a)
    m = 0.5 * (a + b)
    return _unit_mean(f, a, b, cfg, lambda x: (1.0 - t) * m + t * x)


def gt(f: ConvexFn, a: float, b: float, t: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Monotone ``G_t(a, b)``: ``lt`` reparametrised by ``s = (1 + t)/2``.

    ``G_0 = m_f`` and ``G_1 = (f(a) + f(b))/2``; nondecreasing in ``t`` for convex ``f``.
    """
    _check_unit("t", t)
    return lt(f, a, b, 0.5 * (1.0 + t), cfg)


def lt(f: ConvexFn, a: float, b: float, t: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``(1/(2(b-a))) int_a^b f([x, a]_t) + f([x, b]_t) dx``.

    Not monotone in ``t`` in general (``f = x**2`` dips below ``m_f`` near
    ``t = 1/4``), but its integral over ``t`` satisfies the integrated chain.
    """
    _check_unit("t", t)
    f.check_interval(a, b)
    if a == b:
        return f(a)
    left = _unit_mean(f, a, b, cfg, lambda x: (1.0 - t) * x + t * a)
    right = _unit_mean(f, a, b, cfg, lambda x: (1.0 - t) * x + t * b)
    return 0.5 * (left + right)


def _nested(f: ConvexFn, a: float, b: float, points, cfg: QuadratureConfig) -> float:
    """``int_0^1 (1/(b-a)) int_a^b mean_k f(points_k(x, t)) dx dt``, inner integral over ``[a, b]_u``.

    The inner integral is taken for all 15 outer nodes at once, so ``f`` sees
    batches of 225 points (or more) per call.
    """

    def outer(ts):
        def inner(us):
            xs = (1.0 - us[:, None]) * a + us[:, None] * b
            grid = [f(p(xs, ts[None, :])) for p in points]
            return sum(grid) / len(points)

        value, _ = _adaptive(inner, 0.0, 1.0, cfg, True)
        return value

    value, _ = integrate_scalar(outer, 0.0, 1.0, cfg, vectorized=True)
    return value


def ht_integral(f: ConvexFn, a: float, b: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``int_0^1 H_t(a, b) dt`` by nested quadrature."""
    f.check_interval(a, b)
    if a == b:
        return f(a)
    m = 0.5 * (a + b)
    return _nested(f, a, b, [lambda x, t: (1.0 - t) * m + t * x], cfg)


def gt_integral(f: ConvexFn, a: float, b: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``int_0^1 lt(a, b) dt`` by nested quadrature (see :func:`lt`)."""
    f.check_interval(a, b)
    if a == b:
        return f(a)
    return _nested(
        f, a, b, [lambda x, t: (1.0 - t) * x + t * a, lambda x, t: (1.0 - t) * x + t * b], cfg
    )


def tt(f: ConvexFn, a: float, b: float, t: float) -> float:
    """``T_t(a, b)``: average of ``f`` at the two points ``(1 +- t)/2`` of the way along."""
    _check_unit("t", t)
    f.check_interval(a, b)
    p = 0.5 * (1 + t) * a + 0.5 * (1 - t) * b
    q = 0.5 * (1 - t) * a + 0.5 * (1 + t) * b
    return 0.5 * (f(p) + f(q))


def _tt_vec(f: ConvexFn, a: float, b: float, t: np.ndarray) -> np.ndarray:
    p = 0.5 * (1 + t) * a + 0.5 * (1 - t) * b
    q = 0.5 * (1 - t) * a + 0.5 * (1 + t) * b
    return 0.5 * (f(p) + f(q))


class XiNotFoundError(RuntimeError):
    pass


def find_xi(f: ConvexFn, a: float, b: float, cfg: QuadratureConfig = DEFAULT_CONFIG, mean: float | None = None) -> float:
    """Smallest ``xi`` in ``[0, 1]`` with ``T_xi(a, b) = m_f(a, b)``.

    ``T_t`` is nondecreasing in ``t``, so bisection applies. If ``T_0`` already
    matches the mean within tolerance (a plateau, e.g. affine ``f``) the answer is 0.
    """
    if not a < b:
        raise ValueError(f"find_xi needs a < b, got ({a}, {b})")
    m = mean_value(f, a, b, cfg) if mean is None else mean
    tol = max(cfg.abs_tol, cfg.rel_tol * abs(m))
    g0 = tt(f, a, b, 0.0) - m
    if g0 >= -tol:
        return 0.0
    g1 = tt(f, a, b, 1.0) - m
    if g1 < -tol:
        raise XiNotFoundError(
            f"no sign change: T_0 - m = {g0:.3e}, T_1 - m = {g1:.3e} (is {f.label} convex on [{a}, {b}]?)"
        )
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if tt(f, a, b, mid) - m >= 0.0:
            hi = mid
        else:
            lo = mid
    # pick the bracket end closer to the mean
    return hi if abs(tt(f, a, b, hi) - m) <= abs(tt(f, a, b, lo) - m) else lo


def far_bounds(f: ConvexFn, a: float, b: float, lam: float) -> tuple[float, float]:
    """Split-interval bounds ``(l(lam), L(lam))`` around the integral mean."""
    _check_unit("lambda", lam)
    f.check_interval(a, b)
    low = lam * f((lam * b + (2 - lam) * a) / 2) + (1 - lam) * f(((1 + lam) * b + (1 - lam) * a) / 2)
    high = 0.5 * (f(lam * b + (1 - lam) * a) + lam * f(a) + (1 - lam) * f(b))
    return low, high


def xy_sequences(f: ConvexFn, a: float, b: float, n: int, cap: int = XY_CAP) -> tuple[float, float]:
    """Midpoint sum ``x_n`` and trapezoid sum ``y_n`` on ``2**n`` panels."""
    if n < 0 or n > cap:
        raise ValueError(f"n must lie in [0, {cap}], got {n}")
    f.check_interval(a, b)
    panels = 2**n
    h = (b - a) / panels
    mids = a + (np.arange(1, panels + 1) - 0.5) * h
    x_n = float(np.sum(f(mids))) / panels
    inner = np.arange(1, panels) / panels
    interior = float(np.sum(f((1 - inner) * a + inner * b))) if panels > 1 else 0.0
    y_n = (0.5 * (f(a) + f(b)) + interior) / panels
    return x_n, y_n


def vasic_lackovic(
    f: ConvexFn, alpha: float, beta: float, p: float, q: float, y: float, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> tuple[float, float, float, float]:
    """Weighted window bounds; returns ``(f(c), window mean, weighted endpoint mean, y_max)``."""
    if not alpha < beta:
        raise ValueError(f"need alpha < beta, got ({alpha}, {beta})")
    if not (p > 0 and q > 0):
        raise ValueError("weights p and q must be positive")
    if not y > 0:
        raise ValueError("half-width y must be positive")
    f.check_interval(alpha, beta)
    c = (p * alpha + q * beta) / (p + q)
    y_max = (beta - alpha) / (p + q) * min(p, q)
    if c - y < f.lo or c + y > f.hi:
        raise ValueError(f"window [{c - y}, {c + y}] escapes the domain of {f.label}")
    lhs = f(c)
    mid = _unit_mean(f, c - y, c + y, cfg)
    rhs = (p * f(alpha) + q * f(beta)) / (p + q)
    return lhs, mid, rhs, y_max


def convexity_probe(f: ConvexFn, a: float, b: float, grid_points: int = 21) -> float:
    """Largest midpoint-convexity defect ``f((s+t)/2) - (f(s)+f(t))/2`` over a grid.

    Nonpositive for a convex function up to rounding.
    """
    if grid_points < 3:
        raise ValueError("grid_points must be >= 3")
    f.check_interval(a, b)
    grid = np.linspace(a, b, grid_points)
    half_grid = np.linspace(a, b, 2 * grid_points - 1)
    values = f(grid)
    mids = f(half_grid)
    i, j = np.triu_indices(grid_points, k=1)
    defect = mids[i + j] - 0.5 * (values[i] + values[j])
    return float(np.max(defect))
