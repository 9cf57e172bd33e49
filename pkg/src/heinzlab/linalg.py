"""Dense matrix substrate: Jacobi eigensolver, fractional powers, kernels.

Matrices are plain complex ``numpy`` arrays. Positive definite inputs are
wrapped in :class:`PDMatrix`, which certifies the spectrum once and keeps the
eigendecomposition around for fractional powers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .rng import SplitMix64, derive_seed

TOL_HERM = 1e-10
PD_THRESHOLD = 1e-10
COINCIDENT_RTOL = 1e-8
MAX_SWEEPS = 60

_EPS = np.finfo(float).eps


class NotHermitianError(ValueError):
    def __init__(self, asymmetry: float):
        super().__init__(f"matrix is not Hermitian (relative asymmetry {asymmetry:.3e})")
        self.asymmetry = asymmetry


class NotPositiveDefiniteError(ValueError):
    def __init__(self, min_eigenvalue: float, threshold: float):
        super().__init__(
            f"matrix is not positive definite: min eigenvalue {min_eigenvalue:.6e} "
            f"<= threshold {threshold:.6e}"
        )
        self.min_eigenvalue = min_eigenvalue


class JacobiConvergenceError(RuntimeError):
    pass


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # ascending, real
    basis: np.ndarray  # unitary, columns are eigenvectors

    def reconstruct(self) -> np.ndarray:
        return (self.basis * self.eigenvalues) @ self.basis.conj().T


def as_matrix(M) -> np.ndarray:
    """Validate and return ``M`` as a finite 2-D complex array."""
    arr = np.asarray(M, dtype=complex)
    if arr.ndim != 2 or min(arr.shape) < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def hermitian_asymmetry(M: np.ndarray) -> float:
    scale = np.max(np.abs(M))
    if scale == 0:
        return 0.0
    return float(np.max(np.abs(M - M.conj().T)) / scale)


def _require_hermitian(M, tol_herm: float) -> np.ndarray:
    arr = as_matrix(M)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    asym = hermitian_asymmetry(arr)
    if asym > tol_herm:
        raise NotHermitianError(asym)
    return 0.5 * (arr + arr.conj().T)


def jacobi_eigh(M: np.ndarray, max_sweeps: int = MAX_SWEEPS) -> EigenDecomposition:
    """Cyclic Jacobi eigensolver for a Hermitian matrix (no input checks).

    Each rotation first removes the phase of ``a[p, q]`` and then applies the
    real symmetric Jacobi rotation, so the complex case costs the same as the
    real one. A pair is skipped once ``|a[p, q]| <= eps * sqrt(|a[p, p] a[q, q]|)``;
    the iteration stops after a sweep with no rotation.
    """
    a = np.array(M, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return EigenDecomposition(np.zeros(n), v)
    floor = 1e-300 * scale
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                app = a[p, p].real
                aqq = a[q, q].real
                if r <= floor or r <= _EPS * math.sqrt(abs(app * aqq)):
                    a[p, q] = a[q, p] = 0.0
                    continue
                rotated = True
                theta = (aqq - app) / (2.0 * r)
                t = 1.0 / (abs(theta) + math.hypot(theta, 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                e = apq / r
                se, sec = s * e, s * e.conjugate()

                col_p = a[:, p].copy()
                col_q = a[:, q]
                a[:, p] = c * col_p - sec * col_q
                a[:, q] = se * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :]
                a[p, :] = c * row_p - se * row_q
                a[q, :] = sec * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r

                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp - sec * vq
                v[:, q] = se * vp + c * vq
        if not rotated:
            break
    else:
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        raise JacobiConvergenceError(
            f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm {off:.3e})"
        )
    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return EigenDecomposition(w[order], v[:, order])


def hermitian_eig(M, tol_herm: float = TOL_HERM) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    return jacobi_eigh(_require_hermitian(M, tol_herm))


def spectral_radius_hermitian(eigenvalues: np.ndarray) -> float:
    return float(np.max(np.abs(eigenvalues)))


class PDMatrix:
    """Hermitian positive definite matrix with a cached eigendecomposition.

    Construction certifies ``min eigenvalue > PD_THRESHOLD * max(1, ||M||_2)``
    and raises :class:`NotPositiveDefiniteError` otherwise.
    """

    def __init__(self, M, tol_herm: float = TOL_HERM, *, _eig: EigenDecomposition | None = None):
        if _eig is None:
            herm = _require_hermitian(M, tol_herm)
            _eig = jacobi_eigh(herm)
        else:
            herm = as_matrix(M)
        threshold = PD_THRESHOLD * max(1.0, spectral_radius_hermitian(_eig.eigenvalues))
        if _eig.eigenvalues[0] <= threshold:
            raise NotPositiveDefiniteError(float(_eig.eigenvalues[0]), threshold)
        self.matrix = herm
        self.matrix.flags.writeable = False
        self.eig = _eig

    @classmethod
    def from_eig(cls, eigenvalues, basis) -> "PDMatrix":
        eig = EigenDecomposition(np.asarray(eigenvalues, dtype=float), np.asarray(basis, dtype=complex))
        return cls(eig.reconstruct(), _eig=eig)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def log_eigenvalues(self) -> np.ndarray:
        return np.log(self.eig.eigenvalues)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __repr__(self) -> str:
        return f"PDMatrix(dim={self.dim}, spectrum=[{self.eig.eigenvalues[0]:.4g}, {self.eig.eigenvalues[-1]:.4g}])"


def as_pd(A) -> PDMatrix:
    return A if isinstance(A, PDMatrix) else PDMatrix(A)


def fractional_power(A, nu: float) -> PDMatrix:
    """``A**nu`` through the spectral decomposition; any real exponent."""
    A = as_pd(A)
    return PDMatrix.from_eig(np.exp(nu * A.log_eigenvalues), A.eig.basis)


def singular_values(X) -> np.ndarray:
    """Singular values, nonincreasing. Accepts a stack ``(..., m, n)``."""
    arr = np.asarray(X, dtype=complex)
    if arr.ndim < 2:
        raise ValueError("expected a matrix or a stack of matrices")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return np.linalg.svd(arr, compute_uv=False)


def singular_values_jacobi(X) -> np.ndarray:
    """Reference route: square roots of the Jacobi eigenvalues of ``X^H X``."""
    arr = as_matrix(X)
    if arr.shape[0] < arr.shape[1]:
        arr = arr.conj().T
    gram = arr.conj().T @ arr
    w = jacobi_eigh(0.5 * (gram + gram.conj().T)).eigenvalues
    return np.sqrt(np.clip(w, 0.0, None))[::-1]


def schur_product(A, B) -> np.ndarray:
    A = as_matrix(A)
    B = as_matrix(B)
    if A.shape != B.shape:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
    return A * B


def psd_check(M, tol: float = 1e-10, tol_herm: float = TOL_HERM) -> tuple[bool, float]:
    """Return ``(is_psd, min_eigenvalue)`` with the test ``min >= -tol * max(1, ||M||_2)``."""
    w = hermitian_eig(M, tol_herm).eigenvalues
    min_eig = float(w[0])
    return min_eig >= -tol * max(1.0, spectral_radius_hermitian(w)), min_eig


# -- kernel matrices -------------------------------------------------------

KERNEL_KINDS = ("loewner-log", "tanh-ratio", "w-theorem45", "z-theorem41")


@dataclass(frozen=True)
class KernelMatrixSpec:
    """Parameters of a proof kernel.

    ``eigenvalues`` are the positive spectrum values. ``c`` is the exponent
    gap ``beta - alpha`` used by the loewner-log, tanh-ratio and z-theorem41
    kinds (tanh-ratio uses ``t_i = c * log(lambda_i)``); ``nu`` in ``[0, 1/2]``
    is used by w-theorem45.
    """

    kind: str
    eigenvalues: tuple[float, ...]
    c: float = 1.0
    nu: float = 0.0
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}; expected one of {KERNEL_KINDS}")
        if len(self.eigenvalues) == 0:
            raise ValueError("kernel needs at least one eigenvalue")
        if any(not (x > 0) for x in self.eigenvalues):
            raise ValueError("kernel eigenvalues must be positive")
        if self.kind in ("loewner-log", "z-theorem41", "tanh-ratio") and self.c == 0:
            raise ValueError("exponent gap c = beta - alpha must be nonzero")
        if self.kind == "w-theorem45" and not 0.0 <= self.nu <= 0.5:
            raise ValueError("w-theorem45 needs nu in [0, 1/2]")


def r1(nu: float) -> float:
    return min(nu, abs(0.5 - nu), 1.0 - nu)


def _coincident(lam: np.ndarray) -> np.ndarray:
    li, lj = lam[:, None], lam[None, :]
    return np.abs(li - lj) < COINCIDENT_RTOL * np.maximum(li, lj)


def _tanh_ratio(d: np.ndarray) -> np.ndarray:
    out = np.ones_like(d)
    big = np.abs(d) >= 1e-8
    out[big] = np.tanh(d[big]) / d[big]
    return out


def kernel_matrix(spec: KernelMatrixSpec) -> np.ndarray:
    """Real symmetric kernel matrix from the Schur-multiplier arguments.

    Off-diagonal quotients are evaluated through ``log1p``/``expm1`` so that
    nearby eigenvalues keep full relative accuracy; pairs closer than
    ``COINCIDENT_RTOL`` use the analytic limit at their mean.
    """
    lam = np.asarray(spec.eigenvalues, dtype=float)
    li, lj = lam[:, None], lam[None, :]
    same = _coincident(lam)
    c = spec.c
    # u_ij = c * log(lambda_i / lambda_j), accurate for nearby values
    log_ratio = np.log1p((li - lj) / lj)
    u = c * log_ratio

    if spec.kind == "loewner-log":
        # (log l_i - log l_j) / (l_i^c - l_j^c) = log_ratio / (l_j^c expm1(u))
        with np.errstate(divide="ignore", invalid="ignore"):
            off = log_ratio / (lj**c * np.expm1(u))
        mean = 0.5 * (li + lj)
        limit = 1.0 / (c * mean**c)
        return np.where(same, limit, off)

    if spec.kind == "tanh-ratio":
        t = c * np.log(lam)
        return _tanh_ratio(0.5 * (t[:, None] - t[None, :]))

    if spec.kind == "z-theorem41":
        # (l_i^c - l_j^c) / ((log l_i - log l_j)(l_i^c + l_j^c)) = (c/2) tanh(u/2)/(u/2)
        with np.errstate(divide="ignore", invalid="ignore"):
            off = (lj**c * np.expm1(u)) / (log_ratio * lj**c * (np.exp(u) + 1.0))
        return np.where(same, 0.5 * c, off)

    # w-theorem45
    nu = spec.nu
    r = r1(nu)
    num = li**nu * (li ** (1 - 2 * nu) + lj ** (1 - 2 * nu)) * lj**nu
    den = 4 * r * np.sqrt(li * lj) + (1 - 2 * r) * (li + lj)
    w = num / den
    np.fill_diagonal(w, 1.0)
    return w


# -- seeded instances ------------------------------------------------------

_KIND_SALT = {"pd": 1, "unitary": 2, "dense": 3}


def _complex_gaussian(rng: SplitMix64, n_rows: int, n_cols: int) -> np.ndarray:
    re = rng.normals((n_rows, n_cols))
    im = rng.normals((n_rows, n_cols))
    return (re + 1j * im) / math.sqrt(2.0)


def random_instance(n: int, seed: int, kind: str = "dense", spread: float = 10.0, n_cols: int | None = None):
    """Deterministic matrix of the requested kind from ``(n, seed, kind, spread)``.

    * ``dense``: complex Gaussian entries, shape ``n x n_cols``.
    * ``unitary``: QR of a complex Gaussian with the phases of ``R`` folded in.
    * ``pd``: ``G^H G / n + delta I`` with ``delta = lambda_max(G^H G / n) / spread``,
      so the condition number is at most ``spread + 1``. Returns a :class:`PDMatrix`.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if kind not in _KIND_SALT:
        raise ValueError(f"unknown instance kind {kind!r}")
    if not spread > 0:
        raise ValueError("spread must be positive")
    rng = SplitMix64(derive_seed(seed, n, _KIND_SALT[kind]))
    if kind == "dense":
        return _complex_gaussian(rng, n, n if n_cols is None else n_cols)
    G = _complex_gaussian(rng, n, n)
    if kind == "unitary":
        Q, R = np.linalg.qr(G)
        d = np.diag(R)
        phases = np.where(np.abs(d) > 0, d / np.abs(d), 1.0)
        return Q * phases
    H = G.conj().T @ G / n
    H = 0.5 * (H + H.conj().T)
    top = jacobi_eigh(H).eigenvalues[-1]
    return PDMatrix(H + (top / spread) * np.eye(n))
