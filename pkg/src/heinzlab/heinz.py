"""Heinz means, the matrix Heinz term and its norm profile ``F(nu)``.

A :class:`HeinzProfile` diagonalises ``A`` and ``B`` once. Writing
``A = U diag(lam) U^H`` and ``B = V diag(mu) V^H`` and ``Y = U^H X V``,

    A^a X B^b = U ((lam_i^a mu_j^b) o Y) V^H,

so every power term is a Schur product in the eigenbasis, and unitarily
invariant norms can be read off without transforming back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hh import ConvexFn
from .linalg import PDMatrix, as_matrix, as_pd, fractional_power
from .norms import NormKind, unorm
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate_matrix


def heinz_scalar(a: float, b: float, nu: float) -> float:
    """Heinz mean ``(a^nu b^(1-nu) + a^(1-nu) b^nu) / 2``."""
    if not (a > 0 and b > 0):
        raise ValueError("Heinz mean needs positive arguments")
    return 0.5 * (a**nu * b ** (1 - nu) + a ** (1 - nu) * b**nu)


def log_mean(a: float, b: float) -> float:
    """Logarithmic mean ``(a - b) / (ln a - ln b)``, equal to ``a`` when ``a == b``."""
    if not (a > 0 and b > 0):
        raise ValueError("logarithmic mean needs positive arguments")
    if a == b:
        return float(a)
    # b * expm1(u) / u with u = ln(a/b) keeps accuracy for a close to b
    u = math.log(a / b)
    if abs(u) < 1e-8:
        return b * (1 + u / 2 + u * u / 6)
    return b * math.expm1(u) / u


@dataclass(frozen=True)
class HeinzInstance:
    A: PDMatrix
    B: PDMatrix
    X: np.ndarray
    norm: NormKind

    def __post_init__(self):
        object.__setattr__(self, "A", as_pd(self.A))
        object.__setattr__(self, "B", as_pd(self.B))
        X = as_matrix(self.X)
        X.flags.writeable = False
        object.__setattr__(self, "X", X)
        if self.A.dim != X.shape[0] or self.B.dim != X.shape[1]:
            raise ValueError(
                f"shape mismatch: A is {self.A.dim}x{self.A.dim}, B is {self.B.dim}x{self.B.dim}, X is {X.shape}"
            )

    @property
    def is_square(self) -> bool:
        return self.A.dim == self.B.dim


class HeinzProfile:
    """Cached spectral data of a :class:`HeinzInstance`; evaluates ``F(nu)``."""

    def __init__(self, instance: HeinzInstance):
        self.instance = instance
        self.norm = instance.norm
        self._U = instance.A.eig.basis
        self._V = instance.B.eig.basis
        self._log_lam = instance.A.log_eigenvalues
        self._log_mu = instance.B.log_eigenvalues
        self._Y = self._U.conj().T @ instance.X @ self._V

    def _weights(self, a, b) -> np.ndarray:
        """``lam_i^a mu_j^b``; ``a``/``b`` may be arrays of equal length (stacked)."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        return np.exp(a[..., None, None] * self._log_lam[:, None] + b[..., None, None] * self._log_mu[None, :])

    def core(self, a, b) -> np.ndarray:
        """``U^H (A^a X B^b) V`` (stacked over array arguments)."""
        return self._weights(a, b) * self._Y

    def heinz_core(self, nu) -> np.ndarray:
        nu = np.asarray(nu, dtype=float)
        return (self._weights(nu, 1 - nu) + self._weights(1 - nu, nu)) * self._Y

    def to_original(self, core: np.ndarray) -> np.ndarray:
        return self._U @ core @ self._V.conj().T

    def power_term(self, a: float, b: float) -> np.ndarray:
        """``A^a X B^b``."""
        return self.to_original(self.core(a, b))

    def term(self, nu):
        """``A^nu X B^(1-nu) + A^(1-nu) X B^nu``; stacked for an array of ``nu``."""
        return self.to_original(self.heinz_core(nu))

    def norm_of(self, core) -> float | np.ndarray:
        """Norm of a matrix given in eigenbasis coordinates (unitary invariance)."""
        return unorm(core, self.norm)

    def F(self, nu):
        """``|||A^nu X B^(1-nu) + A^(1-nu) X B^nu|||``, vectorized over ``nu``."""
        return self.norm_of(self.heinz_core(nu))

    def as_convex_fn(self, lo: float = -math.inf, hi: float = math.inf) -> ConvexFn:
        return ConvexFn(self.F, lo, hi, label="F", vectorized=True)

    def geometric_term_norm(self) -> float:
        """``|||A^(1/2) X B^(1/2)|||``."""
        return self.norm_of(self.core(0.5, 0.5))

    def arithmetic_term_norm(self) -> float:
        """``|||AX + XB|||``."""
        return self.norm_of(self.core(1.0, 0.0) + self.core(0.0, 1.0))


def as_profile(obj) -> HeinzProfile:
    return obj if isinstance(obj, HeinzProfile) else HeinzProfile(obj)


def heinz_term(inst, nu: float) -> np.ndarray:
    return as_profile(inst).term(nu)


def heinz_term_direct(inst: HeinzInstance, nu: float) -> np.ndarray:
    """Same matrix assembled from explicit fractional powers (reference route)."""
    A, B, X = inst.A, inst.B, inst.X
    return (
        fractional_power(A, nu).matrix @ X @ fractional_power(B, 1 - nu).matrix
        + fractional_power(A, 1 - nu).matrix @ X @ fractional_power(B, nu).matrix
    )


def F_value(profile, nu: float) -> float:
    return float(as_profile(profile).F(nu))


def heinz_integral(inst, alpha: float, beta: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> np.ndarray:
    """``int_alpha^beta (A^nu X B^(1-nu) + A^(1-nu) X B^nu) dnu`` for ``alpha <= beta``."""
    profile = as_profile(inst)
    return integrate_matrix(profile.term, alpha, beta, cfg, vectorized=True)


def hk_one_sided_integral(inst, cfg: QuadratureConfig = DEFAULT_CONFIG) -> np.ndarray:
    """``int_0^1 A^nu X B^(1-nu) dnu``."""
    profile = as_profile(inst)
    return integrate_matrix(lambda nu: profile.to_original(profile.core(nu, 1 - nu)), 0.0, 1.0, cfg, vectorized=True)
