"""Globally adaptive Gauss-Kronrod (7/15) integration of scalar and matrix functions.

The 7-point Gauss rule embedded in the 15-point Kronrod rule gives the error
estimate ``|K - G|`` on each panel. The panel with the largest estimate is
bisected until the summed estimate satisfies
``err <= max(abs_tol, rel_tol * scale)``, where ``scale`` is ``|value|`` for
scalars and the largest entry modulus for matrices.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable

import numpy as np

# Kronrod abscissae on [0, 1) (mirrored), odd indices are the Gauss nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[[13, 11, 9]] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 2**14
    base_rule_points: int = 15

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if self.base_rule_points != 15:
            raise ValueError("only the 15-point Gauss-Kronrod base rule is available")


DEFAULT_CONFIG = QuadratureConfig()


class QuadratureError(RuntimeError):
    """Subdivision budget exhausted; carries the best available estimate."""

    def __init__(self, message: str, value, err_estimate: float):
        super().__init__(message)
        self.value = value
        self.err_estimate = err_estimate


def _panel(fn, lo: float, hi: float, vectorized: bool, shape):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid + half * NODES
    if vectorized:
        vals = np.asarray(fn(x))
    else:
        vals = np.array([np.asarray(fn(xi)) for xi in x])
    if vals.shape[0] != 15:
        raise ValueError(f"vectorized integrand returned leading dimension {vals.shape[0]}, expected 15")
    if shape is not None and vals.shape[1:] != shape:
        raise ValueError(f"integrand changed shape: {vals.shape[1:]} vs {shape}")
    if not np.all(np.isfinite(vals)):
        raise ValueError(f"integrand is not finite on [{lo}, {hi}]")
    kron = half * np.tensordot(KRONROD_WEIGHTS, vals, axes=1)
    gauss = half * np.tensordot(GAUSS_WEIGHTS, vals, axes=1)
    err = float(np.max(np.abs(kron - gauss))) if np.ndim(kron) else float(abs(kron - gauss))
    return kron, err, vals.shape[1:]


def _adaptive(fn, a: float, b: float, cfg: QuadratureConfig, vectorized: bool):
    a = float(a)
    b = float(b)
    if b < a:
        raise ValueError(f"integration limits must satisfy a <= b, got [{a}, {b}]")
    if a == b:
        probe = np.asarray(fn(np.array([a] * 15)) if vectorized else fn(a))
        if vectorized:
            probe = probe[0]
        return np.zeros_like(probe, dtype=np.result_type(probe, float)), 0.0

    value, err, shape = _panel(fn, a, b, vectorized, None)
    heap = [(-err, 0, a, b, value)]
    total = value
    total_err = err
    counter = 1
    while True:
        scale = float(np.max(np.abs(total))) if np.ndim(total) else abs(total)
        if total_err <= max(cfg.abs_tol, cfg.rel_tol * scale):
            return total, total_err
        if counter >= cfg.max_subdivisions:
            raise QuadratureError(
                f"subdivision budget {cfg.max_subdivisions} exhausted on [{a}, {b}] "
                f"(error estimate {total_err:.3e})",
                total,
                total_err,
            )
        neg_err, _, lo, hi, val = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            # panel cannot be split further in floating point
            raise QuadratureError(
                f"panel [{lo}, {hi}] reached floating-point resolution (error estimate {total_err:.3e})",
                total,
                total_err,
            )
        left, e_left, _ = _panel(fn, lo, mid, vectorized, shape)
        right, e_right, _ = _panel(fn, mid, hi, vectorized, shape)
        total = total - val + left + right
        total_err = total_err + neg_err + e_left + e_right
        heapq.heappush(heap, (-e_left, counter, lo, mid, left))
        heapq.heappush(heap, (-e_right, counter + 1, mid, hi, right))
        counter += 1
        if counter % 64 == 0:
            # refresh the running sums to keep cancellation error out of the estimate
            total = sum(item[4] for item in heap)
            total_err = -sum(item[0] for item in heap)


def integrate_scalar(
    f: Callable, a: float, b: float, cfg: QuadratureConfig = DEFAULT_CONFIG, *, vectorized: bool = False
) -> tuple[float, float]:
    """Integrate a real function over ``[a, b]``; returns ``(value, err_estimate)``.

    With ``vectorized=True`` the integrand receives an array of 15 nodes.
    """
    value, err = _adaptive(f, a, b, cfg, vectorized)
    return float(value), err


def integrate_matrix(
    g: Callable, a: float, b: float, cfg: QuadratureConfig = DEFAULT_CONFIG, *, vectorized: bool = False
) -> np.ndarray:
    """Entrywise integral of a matrix-valued function over ``[a, b]``.

    With ``vectorized=True`` the integrand maps an array of nodes to a stack of
    matrices of shape ``(len(nodes), m, n)``.
    """
    value, _ = integrate_matrix_with_error(g, a, b, cfg, vectorized=vectorized)
    return value


def integrate_matrix_with_error(g, a, b, cfg: QuadratureConfig = DEFAULT_CONFIG, *, vectorized: bool = False):
    value, err = _adaptive(g, a, b, cfg, vectorized)
    if np.ndim(value) != 2:
        raise ValueError("integrand must return a matrix")
    return value, err
