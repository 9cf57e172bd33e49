"""Registry and evaluator of the Heinz-type inequality chains.

Every chain is a list of labeled terms that should be nondecreasing. A
:class:`ChainReport` records the terms, the successive margins
``value[k+1] - value[k]`` and a verdict:

* ``holds``: every margin is at least ``-tolerance``;
* ``violated``: some margin is below ``-tolerance``;
* ``degenerate``: a removable singularity (``1/(1-2mu)``, ``1/|beta-alpha|``,
  ``1/mu``) fell inside the guard band and the limit values were reported.

``tolerance = rel_tol * max|term|`` with ``rel_tol`` defaulting to ``1e-8``;
the environment variable ``HEINZLAB_TOL_CHAIN`` overrides the default.

Chains on a scalar convex ``f`` (the T3.x family) read ``F(1/2)`` and ``F(mu)``
literally, which matches the Hermite-Hadamard endpoints only for an ``f``
symmetric about ``1/2`` (as the Heinz profile is).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import hh
from .heinz import HeinzInstance, HeinzProfile, log_mean
from .hh import ConvexFn
from .linalg import r1
from .norms import NormKind
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate_matrix_with_error
from .rng import SplitMix64

TOL_ENV = "HEINZLAB_TOL_CHAIN"
DEFAULT_REL_TOL = 1e-8
GUARD = 1e-6

HOLDS = "holds"
VIOLATED = "violated"
DEGENERATE = "degenerate"

# Counterexample data, exactly as published.
COUNTEREXAMPLE_X = np.array([
    [52.39, 38.71, 12.36],
    [32.86, 35.38, 64.82],
    [91.79, 99.45, 66.10],
])
COUNTEREXAMPLE_A = np.array([
    [92.315, 87.791, 71.090],
    [87.791, 120.130, 83.340],
    [71.090, 83.340, 103.610],
])
COUNTEREXAMPLE_B = np.array([
    [118.482, 23.249, 112.676],
    [23.249, 10.343, 38.224],
    [112.676, 38.224, 156.551],
])
COUNTEREXAMPLE_NU = 0.468
PUBLISHED_LHS = 78135.5
PUBLISHED_RHS = 78125.4
PUBLISHED_DIGITS_TOL = 0.5


def default_rel_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_REL_TOL
    value = float(raw)
    if not value >= 0:
        raise ValueError(f"{TOL_ENV} must be a nonnegative number, got {raw!r}")
    return value


@dataclass
class ChainReport:
    theorem_id: str
    labels: list[str]
    values: list[float]
    margins: list[float]
    tolerance: float
    verdict: str
    params: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    @property
    def worst_margin(self) -> float:
        return min(self.margins) if self.margins else 0.0

    @property
    def max_term(self) -> float:
        return max((abs(v) for v in self.values), default=0.0)

    def to_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "params": dict(self.params),
            "labels": list(self.labels),
            "values": [float(v) for v in self.values],
            "margins": [float(m) for m in self.margins],
            "tolerance": float(self.tolerance),
            "verdict": self.verdict,
            "diagnostics": dict(self.diagnostics),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ChainReport":
        return cls(
            theorem_id=data["theorem_id"],
            labels=list(data["labels"]),
            values=[float(v) for v in data["values"]],
            margins=[float(m) for m in data["margins"]],
            tolerance=float(data["tolerance"]),
            verdict=data["verdict"],
            params=dict(data.get("params", {})),
            diagnostics=dict(data.get("diagnostics", {})),
        )

    def describe(self) -> str:
        lines = [f"{self.theorem_id}: {self.verdict} (tolerance {self.tolerance:.3e})"]
        if self.params:
            lines.append("  params: " + ", ".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}"
                                                  for k, v in self.params.items()))
        width = max(len(label) for label in self.labels)
        for k, (label, value) in enumerate(zip(self.labels, self.values)):
            margin = f"   margin {self.margins[k]:+.6e}" if k < len(self.margins) else ""
            lines.append(f"  {label.ljust(width)}  {value:.12g}{margin}")
        for key, value in self.diagnostics.items():
            lines.append(f"  [{key}] {value}")
        return "\n".join(lines)


def make_report(theorem_id, labels, values, params, diagnostics, rel_tol, degenerate=False) -> ChainReport:
    values = [float(v) for v in values]
    margins = [b - a for a, b in zip(values, values[1:])]
    tolerance = rel_tol * max(abs(v) for v in values)
    if degenerate:
        verdict = DEGENERATE
    elif all(m >= -tolerance for m in margins):
        verdict = HOLDS
    else:
        verdict = VIOLATED
    return ChainReport(theorem_id, list(labels), values, margins, tolerance, verdict, dict(params), dict(diagnostics))


# ---------------------------------------------------------------- parameters


@dataclass(frozen=True)
class Param:
    name: str
    description: str
    default: float | None = None
    integer: bool = False
    check: Callable[[float], bool] | None = None

    def coerce(self, value):
        if self.integer:
            if float(value) != int(float(value)):
                raise ValueError(f"parameter {self.name} must be an integer, got {value}")
            value = int(float(value))
        else:
            value = float(value)
            if not math.isfinite(value):
                raise ValueError(f"parameter {self.name} must be finite, got {value}")
        if self.check is not None and not self.check(value):
            raise ValueError(f"parameter {self.name}={value} outside its range: {self.description}")
        return value


def _unit(x):
    return 0.0 <= x <= 1.0


def _open_unit(x):
    return 0.0 < x < 1.0


def _positive(x):
    return x > 0


P_MU_UNIT = Param("mu", "mu in [0, 1]", 0.25, check=_unit)
P_T = Param("t", "t in [0, 1]", 0.5, check=_unit)
P_LAM = Param("lam", "lambda in [0, 1]", 0.5, check=_unit)
P_ALPHA_UNIT = Param("alpha", "alpha in [0, 1]", 0.0, check=_unit)
P_BETA_UNIT = Param("beta", "beta in [0, 1]", 1.0, check=_unit)
P_NU = Param("nu", "nu in [0, 1]", 0.25, check=_unit)


@dataclass(frozen=True)
class ChainSpec:
    theorem_id: str
    title: str
    subject: str  # "function", "matrix", "scalar" or "fixed"
    params: tuple[Param, ...]
    evaluate: Callable
    sample: Callable[[SplitMix64], dict] | None = None
    requires_square: bool = False
    expect: str = HOLDS

    def resolve(self, params: dict | None) -> dict:
        params = dict(params or {})
        known = {p.name: p for p in self.params}
        unknown = sorted(set(params) - set(known))
        if unknown:
            raise ValueError(f"{self.theorem_id} does not take parameter(s) {', '.join(unknown)}; "
                             f"expected {', '.join(known) or 'none'}")
        out = {}
        for p in self.params:
            value = params.get(p.name, p.default)
            out[p.name] = None if value is None else p.coerce(value)
        return out


# ---------------------------------------------------------------- subjects


def _as_profile(subject) -> HeinzProfile:
    if isinstance(subject, HeinzProfile):
        return subject
    if isinstance(subject, HeinzInstance):
        return HeinzProfile(subject)
    raise TypeError(f"this chain needs a HeinzInstance or HeinzProfile, got {type(subject).__name__}")


def _as_function(subject) -> ConvexFn:
    if isinstance(subject, ConvexFn):
        return subject
    return _as_profile(subject).as_convex_fn(0.0, 1.0)


def _oriented(a: float, b: float) -> tuple[float, float]:
    """Normalise an interval given in either orientation."""
    return (a, b) if a <= b else (b, a)


def _probe(f: ConvexFn, lo: float, hi: float, scale: float) -> dict:
    if hi <= lo:
        return {}
    defect = hh.convexity_probe(f, lo, hi)
    return {"convexity_defect": defect, "convexity_ok": bool(defect <= 1e-10 * max(1.0, scale))}


class _Terms:
    """Norm terms of a Heinz profile, all evaluated in eigenbasis coordinates."""

    def __init__(self, profile: HeinzProfile):
        self.p = profile

    def F(self, nu: float) -> float:
        return float(self.p.F(nu))

    def core(self, a: float, b: float) -> np.ndarray:
        return self.p.core(a, b)

    def heinz(self, nu: float) -> np.ndarray:
        return self.p.heinz_core(nu)

    def norm(self, core: np.ndarray) -> float:
        return float(self.p.norm_of(core))

    def geometric(self) -> float:
        """``|||A^(1/2) X B^(1/2)|||``."""
        return self.norm(self.core(0.5, 0.5))

    def arithmetic_core(self) -> np.ndarray:
        """``AX + XB``."""
        return self.core(1.0, 0.0) + self.core(0.0, 1.0)

    def integral_mean(self, lo: float, hi: float, cfg: QuadratureConfig) -> tuple[float, float]:
        """``|||int_lo^hi (heinz term) dnu||| / (hi - lo)`` and the quadrature error estimate."""
        value, err = integrate_matrix_with_error(self.p.heinz_core, lo, hi, cfg, vectorized=True)
        return self.norm(value) / (hi - lo), err


# ---------------------------------------------------------------- scalar (T3.x) chains


def _t31(subject, prm, cfg):
    f = _as_function(subject)
    mu, t = prm["mu"], prm["t"]
    lo, hi = _oriented(mu, 1.0 - mu)
    labels = ["2|||A^1/2XB^1/2||| = F(1/2)", "H_t(mu,1-mu)", "m_F(mu,1-mu)", "G_t(mu,1-mu)", "F(mu)"]
    if hi - lo < GUARD:
        return labels, [f(0.5)] * 5, True, {"limit": "mu -> 1/2"}
    values = [f(0.5), hh.ht(f, lo, hi, t, cfg), hh.mean_value(f, lo, hi, cfg), hh.gt(f, lo, hi, t, cfg), f(mu)]
    return labels, values, False, _probe(f, lo, hi, max(map(abs, values)))


def _t32(subject, prm, cfg):
    f = _as_function(subject)
    mu = prm["mu"]
    lo, hi = _oriented(mu, 0.5)
    labels = [
        "F(1/2)",
        "F((2mu+1)/4)",
        "quarter-window mean",
        "int_0^1 H_t dt",
        "(F((2mu+1)/4) + m_F)/2",
        "m_F(mu,1/2) = G_0",
        "int_0^1 G_t dt",
        "(F((2mu+1)/4) + (F(mu)+F(1/2))/2)/2",
        "(F(mu) + F(1/2))/2",
        "F(mu)",
    ]
    if hi - lo < GUARD:
        return labels, [f(0.5)] * 10, True, {"limit": "mu -> 1/2"}
    mid = 0.5 * (lo + hi)
    f_mid, f_half, f_mu = f(mid), f(0.5), f(mu)
    m = hh.mean_value(f, lo, hi, cfg)
    # (2/(b-a)) int over [(3a+b)/4, (a+3b)/4] is the mean over that half-width window
    quarter = hh.mean_value(f, 0.75 * lo + 0.25 * hi, 0.25 * lo + 0.75 * hi, cfg)
    values = [
        f_half,
        f_mid,
        quarter,
        hh.ht_integral(f, lo, hi, cfg),
        0.5 * (f_mid + m),
        m,
        hh.gt_integral(f, lo, hi, cfg),
        0.5 * (f_mid + 0.5 * (f_mu + f_half)),
        0.5 * (f_mu + f_half),
        f_mu,
    ]
    return labels, values, False, _probe(f, lo, hi, max(map(abs, values)))


def _t33(subject, prm, cfg):
    f = _as_function(subject)
    mu, n = prm["mu"], prm["n"]
    lo, hi = _oriented(mu, 1.0 - mu)
    labels = [f"x_{k}" for k in range(n + 1)] + ["m_F(mu,1-mu)"] + [f"y_{k}" for k in range(n, -1, -1)]
    if hi - lo < GUARD:
        return labels, [f(0.5)] * len(labels), True, {"limit": "mu -> 1/2"}
    pairs = [hh.xy_sequences(f, lo, hi, k) for k in range(n + 1)]
    xs = [x for x, _ in pairs]
    ys = [y for _, y in pairs]
    values = xs + [hh.mean_value(f, lo, hi, cfg)] + ys[::-1]
    diag = {"x0_minus_F_half": xs[0] - f(0.5), "y0_minus_F_mu": ys[0] - f(mu)}
    diag.update(_probe(f, lo, hi, max(map(abs, values))))
    return labels, values, False, diag


def _t34(subject, prm, cfg):
    f = _as_function(subject)
    lo, hi = _oriented(prm["alpha"], prm["beta"])
    lam = prm["lam"]
    labels = ["F((alpha+beta)/2)", "l(lambda)", "m_F(alpha,beta)", "L(lambda)", "(F(alpha)+F(beta))/2"]
    if hi - lo < GUARD:
        return labels, [f(0.5 * (lo + hi))] * 5, True, {"limit": "beta -> alpha"}
    low, high = hh.far_bounds(f, lo, hi, lam)
    values = [f(0.5 * (lo + hi)), low, hh.mean_value(f, lo, hi, cfg), high, 0.5 * (f(lo) + f(hi))]
    return labels, values, False, _probe(f, lo, hi, max(map(abs, values)))


def _t35(subject, prm, cfg):
    f = _as_function(subject)
    mu = prm["mu"]
    lo, hi = _oriented(mu, 1.0 - mu)
    labels = ["F(1/2)", "T_eta", "T_xi", "m_F(mu,1-mu)", "T_lambda", "F(mu)"]
    if hi - lo < GUARD:
        return labels, [f(0.5)] * 6, True, {"limit": "mu -> 1/2"}
    m = hh.mean_value(f, lo, hi, cfg)
    xi = hh.find_xi(f, lo, hi, cfg, mean=m)
    eta = prm["eta"] if prm["eta"] is not None else prm["eta_frac"] * xi
    lam = prm["lam"] if prm["lam"] is not None else xi + prm["lam_frac"] * (1.0 - xi)
    if not 0.0 <= eta <= xi:
        raise ValueError(f"eta={eta} must lie in [0, xi] with xi={xi:.12g}")
    if not xi <= lam <= 1.0:
        raise ValueError(f"lam={lam} must lie in [xi, 1] with xi={xi:.12g}")
    values = [f(0.5), hh.tt(f, lo, hi, eta), hh.tt(f, lo, hi, xi), m, hh.tt(f, lo, hi, lam), f(mu)]
    diag = {"xi": xi, "eta": eta, "lambda": lam}
    diag.update(_probe(f, lo, hi, max(map(abs, values))))
    return labels, values, False, diag


def _t36(subject, prm, cfg):
    f = _as_function(subject)
    alpha, beta, p, q = prm["alpha"], prm["beta"], prm["p"], prm["q"]
    if not alpha < beta:
        raise ValueError(f"need alpha < beta, got ({alpha}, {beta})")
    y_max = (beta - alpha) / (p + q) * min(p, q)
    y = prm["y"] if prm["y"] is not None else prm["y_frac"] * y_max
    if not 0 < y <= y_max * (1 + 1e-12):
        raise ValueError(f"the chain is asserted only for 0 < y <= y_max = {y_max:.12g}, got y = {y}")
    y = min(y, y_max)
    lhs, mid, rhs, _ = hh.vasic_lackovic(f, alpha, beta, p, q, y, cfg)
    labels = ["F(c)", "window mean", "(pF(alpha)+qF(beta))/(p+q)"]
    diag = {"c": (p * alpha + q * beta) / (p + q), "y": y, "y_max": y_max}
    diag.update(_probe(f, alpha, beta, max(abs(lhs), abs(mid), abs(rhs))))
    return labels, [lhs, mid, rhs], False, diag


# ---------------------------------------------------------------- matrix chains


def _t41(subject, prm, cfg):
    T = _Terms(_as_profile(subject))
    alpha, beta = prm["alpha"], prm["beta"]
    lo, hi = _oriented(alpha, beta)
    labels = ["F((alpha+beta)/2)", "|||int_alpha^beta|||/|beta-alpha|", "|||term(alpha)+term(beta)|||/2"]
    if hi - lo < GUARD:
        return labels, [T.F(0.5 * (lo + hi))] * 3, True, {"limit": "beta -> alpha"}
    integral, err = T.integral_mean(lo, hi, cfg)
    values = [T.F(0.5 * (alpha + beta)), integral, 0.5 * T.norm(T.heinz(alpha) + T.heinz(beta))]
    return labels, values, False, {"quad_err": err}


def _c42a(subject, prm, cfg):
    T = _Terms(_as_profile(subject))
    mu = prm["mu"]
    labels = ["F((2mu+1)/4)", "2|||int_mu^1/2|||/|1-2mu|", "|||term(mu)+2A^1/2XB^1/2|||/2"]
    scale_ref = T.F(0.5)
    gaps = {}
    for tag, probe_mu in (("half_minus", 0.5 - 1e-4), ("half_plus", 0.5 + 1e-4)):
        value, _ = T.integral_mean(*_oriented(probe_mu, 0.5), cfg)
        gaps[f"limit_gap_{tag}"] = abs(value - scale_ref) / max(scale_ref, 1e-300)
    if abs(1.0 - 2.0 * mu) < GUARD:
        return labels, [scale_ref] * 3, True, {"limit": "mu -> 1/2", **gaps}
    integral, err = T.integral_mean(*_oriented(mu, 0.5), cfg)
    values = [T.F((2 * mu + 1) / 4), integral, 0.5 * T.norm(T.heinz(mu) + 2.0 * T.core(0.5, 0.5))]
    return labels, values, False, {"quad_err": err, **gaps}


def _c42b(subject, prm, cfg):
    T = _Terms(_as_profile(subject))
    mu = prm["mu"]
    labels = ["F(mu/2)", "|||int_0^mu|||/|mu|", "|||AX+XB+term(mu)|||/2"]
    s_ref = T.norm(T.arithmetic_core())
    value, _ = T.integral_mean(0.0, 1e-4, cfg)
    gaps = {"limit_gap_zero": abs(value - s_ref) / max(s_ref, 1e-300)}
    if abs(mu) < GUARD:
        return labels, [s_ref] * 3, True, {"limit": "mu -> 0", **gaps}
    integral, err = T.integral_mean(*_oriented(0.0, mu), cfg)
    values = [T.F(0.5 * mu), integral, 0.5 * T.norm(T.arithmetic_core() + T.heinz(mu))]
    return labels, values, False, {"quad_err": err, **gaps}


def _c43(subject, prm, cfg):
    T = _Terms(_as_profile(subject))
    alpha, beta = prm["alpha"], prm["beta"]
    if not alpha < beta:
        raise ValueError(f"need alpha < beta, got ({alpha}, {beta})")
    integral, err = T.integral_mean(alpha, beta, cfg)
    labels = [
        "2|||A^1/2XB^1/2|||",
        "F((alpha+beta)/2)",
        "|||int_alpha^beta|||/(beta-alpha)",
        "|||term(alpha)+term(beta)|||/2",
        "(F(alpha)+F(beta))/2",
        "|||AX+XB|||",
    ]
    values = [
        2.0 * T.geometric(),
        T.F(0.5 * (alpha + beta)),
        integral,
        0.5 * T.norm(T.heinz(alpha) + T.heinz(beta)),
        0.5 * (T.F(alpha) + T.F(beta)),
        T.norm(T.arithmetic_core()),
    ]
    return labels, values, False, {"quad_err": err}


def _kr0(subject, prm, cfg):
    T = _Terms(_as_profile(subject))
    nu = prm["nu"]
    r0 = min(nu, 1.0 - nu)
    values = [T.F(nu), 4 * r0 * T.geometric() + (1 - 2 * r0) * T.norm(T.arithmetic_core())]
    return ["F(nu)", "4r0|||A^1/2XB^1/2||| + (1-2r0)|||AX+XB|||"], values, False, {"r0": r0}


def _r1_bound(T: _Terms, r: float) -> float:
    return T.norm(4 * r * T.core(0.5, 0.5) + (1 - 2 * r) * T.arithmetic_core())


def _t45(subject, prm, cfg):
    T = _Terms(_as_profile(subject))
    nu = prm["nu"]
    r = r1(nu)
    return ["F(nu)", "|||4r1 A^1/2XB^1/2 + (1-2r1)(AX+XB)|||"], [T.F(nu), _r1_bound(T, r)], False, {"r1": r}


def _c46(subject, prm, cfg):
    T = _Terms(_as_profile(subject))
    nu = prm["nu"]
    r = r1(nu)
    g = T.geometric()
    s = T.norm(T.arithmetic_core())
    labels = [
        "F(nu)",
        "|||4r1 A^1/2XB^1/2 + (1-2r1)(AX+XB)|||",
        "4r1 g + (1-2r1) S",
        "2(2r1-1) g + 2(1-r1) S",
        "S = |||AX+XB|||",
    ]
    values = [T.F(nu), _r1_bound(T, r), 4 * r * g + (1 - 2 * r) * s, 2 * (2 * r - 1) * g + 2 * (1 - r) * s, s]
    return labels, values, False, {"r1": r, **_without_penultimate(values)}


def _without_penultimate(values: list[float]) -> dict:
    """The penultimate printed term exceeds the last one by ``(1-2r)(S-2g) >= 0``;
    report whether the chain holds once that term is dropped."""
    rest = values[:-2] + values[-1:]
    tol = default_rel_tol() * max(abs(v) for v in values)
    return {
        "penultimate_excess": values[-2] - values[-1],
        "holds_without_penultimate": bool(all(b - a >= -tol for a, b in zip(rest, rest[1:]))),
    }


def _c47(subject, prm, cfg):
    T = _Terms(_as_profile(subject))
    r, t = prm["r"], prm["t_zhan"]
    s = r1(r - 0.5)
    axb = T.core(1.0, 1.0)
    mixed = T.core(1.5, 0.5) + T.core(0.5, 1.5)
    zhan = T.core(2.0, 0.0) + t * axb + T.core(0.0, 2.0)
    n_axb, n_mixed, n_zhan = T.norm(axb), T.norm(mixed), T.norm(zhan)
    factor = 2.0 / (t + 2.0)
    labels = [
        "|||A^rXB^(2-r)+A^(2-r)XB^r|||",
        "|||4s AXB + (1-2s)(A^3/2XB^1/2+A^1/2XB^3/2)|||",
        "4s|||AXB||| + (1-2s)|||A^3/2XB^1/2+A^1/2XB^3/2|||",
        "4s|||AXB||| + (1-2s)(2/(t+2))|||Z|||",
        "2(2s-1)|||AXB||| + 4(1-s)/(t+2)|||Z|||",
        "(2/(t+2))|||Z|||",
    ]
    values = [
        T.norm(T.core(r, 2 - r) + T.core(2 - r, r)),
        T.norm(4 * s * axb + (1 - 2 * s) * mixed),
        4 * s * n_axb + (1 - 2 * s) * n_mixed,
        4 * s * n_axb + (1 - 2 * s) * factor * n_zhan,
        2 * (2 * s - 1) * n_axb + 4 * (1 - s) / (t + 2) * n_zhan,
        factor * n_zhan,
    ]
    return labels, values, False, {"s": s, "zhan_factor": factor, **_without_penultimate(values)}


def _hk(subject, prm, cfg):
    P = _as_profile(subject)
    T = _Terms(P)
    value, err = integrate_matrix_with_error(lambda nu: P.core(nu, 1.0 - nu), 0.0, 1.0, cfg, vectorized=True)
    labels = ["|||A^1/2XB^1/2|||", "|||int_0^1 A^nu X B^(1-nu)|||", "|||AX+XB|||/2"]
    values = [T.geometric(), T.norm(value), 0.5 * T.norm(T.arithmetic_core())]
    return labels, values, False, {"quad_err": err}


def _gla(subject, prm, cfg):
    a, b = prm["a"], prm["b"]
    return ["sqrt(ab)", "L(a,b)", "(a+b)/2"], [math.sqrt(a * b), log_mean(a, b), 0.5 * (a + b)], False, {}


def counterexample_instance(norm: NormKind | None = None) -> HeinzInstance:
    """The published 3x3 data; a PD certification failure here means a transcription bug."""
    return HeinzInstance(COUNTEREXAMPLE_A, COUNTEREXAMPLE_B, COUNTEREXAMPLE_X, norm or NormKind.trace())


def _falsify(subject, prm, cfg):
    T = _Terms(HeinzProfile(counterexample_instance()))
    nu = prm["nu"]
    r0 = min(nu, 1.0 - nu)
    lhs = T.F(nu)
    rhs = T.norm(4 * r0 * T.core(0.5, 0.5) + (1 - 2 * r0) * T.arithmetic_core())
    diag = {"r0": r0}
    if nu == COUNTEREXAMPLE_NU:
        diag.update(
            published_lhs=PUBLISHED_LHS,
            published_rhs=PUBLISHED_RHS,
            lhs_within_published=bool(abs(lhs - PUBLISHED_LHS) <= PUBLISHED_DIGITS_TOL),
            rhs_within_published=bool(abs(rhs - PUBLISHED_RHS) <= PUBLISHED_DIGITS_TOL),
        )
    return ["tr|A^nuXB^(1-nu)+A^(1-nu)XB^nu|", "tr|4r0 A^1/2XB^1/2 + (1-2r0)(AX+XB)|"], [lhs, rhs], False, diag


# ---------------------------------------------------------------- sampling


def _sample_pair(rng: SplitMix64, lo: float, hi: float, min_gap: float, ordered: bool) -> tuple[float, float]:
    while True:
        a, b = rng.uniform(lo, hi), rng.uniform(lo, hi)
        if abs(b - a) >= min_gap:
            return (min(a, b), max(a, b)) if ordered else (a, b)


def _sample_away(rng: SplitMix64, lo: float, hi: float, avoid: float, gap: float) -> float:
    while True:
        x = rng.uniform(lo, hi)
        if abs(x - avoid) >= gap:
            return x


def _s_mu_t(rng):
    return {"mu": rng.uniform(), "t": rng.uniform()}


def _s_mu(rng):
    return {"mu": rng.uniform()}


def _s_t33(rng):
    return {"mu": rng.uniform(), "n": rng.integer(0, 6)}


def _s_t34(rng):
    alpha, beta = _sample_pair(rng, 0.0, 1.0, 0.05, True)
    return {"alpha": alpha, "beta": beta, "lam": rng.uniform()}


def _s_t35(rng):
    return {"mu": _sample_away(rng, 0.0, 1.0, 0.5, 1e-3), "eta_frac": rng.uniform(), "lam_frac": rng.uniform()}


def _s_t36(rng):
    alpha, beta = _sample_pair(rng, 0.0, 1.0, 0.05, True)
    return {
        "alpha": alpha,
        "beta": beta,
        "p": rng.log_uniform(0.1, 10.0),
        "q": rng.log_uniform(0.1, 10.0),
        "y_frac": rng.uniform(0.05, 1.0),
    }


def _s_t41(rng):
    alpha, beta = _sample_pair(rng, -0.5, 1.5, 0.05, False)
    return {"alpha": alpha, "beta": beta}


def _s_c42a(rng):
    return {"mu": _sample_away(rng, -0.5, 1.5, 0.5, 0.005)}


def _s_c42b(rng):
    return {"mu": _sample_away(rng, -0.5, 1.5, 0.0, 0.01)}


def _s_c43(rng):
    alpha, beta = _sample_pair(rng, 0.0, 1.0, 0.05, True)
    return {"alpha": alpha, "beta": beta}


def _s_nu(rng):
    return {"nu": rng.uniform()}


def _s_c47(rng):
    return {"r": rng.uniform(0.5, 1.5), "t_zhan": rng.uniform(-1.95, 2.0)}


def _s_none(rng):
    return {}


def _s_gla(rng):
    return {"a": rng.log_uniform(1e-2, 1e2), "b": rng.log_uniform(1e-2, 1e2)}


# ---------------------------------------------------------------- registry

def _real(name, default):
    return Param(name, "any real number", default)


REGISTRY: dict[str, ChainSpec] = {
    spec.theorem_id: spec
    for spec in [
        ChainSpec("T3.1", "H_t / G_t refinement on [mu, 1-mu]", "function", (P_MU_UNIT, P_T), _t31, _s_mu_t),
        ChainSpec("T3.2", "ten-term refinement on [mu, 1/2]", "function", (P_MU_UNIT,), _t32, _s_mu),
        ChainSpec(
            "T3.3",
            "midpoint / trapezoid sequences x_n, y_n",
            "function",
            (P_MU_UNIT, Param("n", f"integer in [0, {hh.XY_CAP}]", 4, True, lambda n: 0 <= n <= hh.XY_CAP)),
            _t33,
            _s_t33,
        ),
        ChainSpec("T3.4", "split bounds l(lambda), L(lambda) on [alpha, beta]", "function",
                  (P_ALPHA_UNIT, P_BETA_UNIT, P_LAM), _t34, _s_t34),
        ChainSpec(
            "T3.5",
            "T_t chain around the intermediate point xi",
            "function",
            (
                Param("mu", "mu in (0, 1)", 0.25, check=_open_unit),
                Param("eta", "eta in [0, xi] (default xi * eta_frac)", None, check=_unit),
                Param("lam", "lambda in [xi, 1] (default xi + lam_frac (1 - xi))", None, check=_unit),
                Param("eta_frac", "eta_frac in [0, 1]", 0.5, check=_unit),
                Param("lam_frac", "lam_frac in [0, 1]", 0.5, check=_unit),
            ),
            _t35,
            _s_t35,
        ),
        ChainSpec(
            "T3.6",
            "weighted window bounds, asserted for y <= y_max",
            "function",
            (
                P_ALPHA_UNIT,
                P_BETA_UNIT,
                Param("p", "p > 0", 1.0, check=_positive),
                Param("q", "q > 0", 1.0, check=_positive),
                Param("y", "0 < y <= y_max (default y_frac * y_max)", None, check=_positive),
                Param("y_frac", "y_frac in (0, 1]", 1.0, check=lambda v: 0 < v <= 1),
            ),
            _t36,
            _s_t36,
        ),
        ChainSpec("T4.1", "midpoint <= integral mean <= endpoint average", "matrix",
                  (_real("alpha", 0.0), _real("beta", 1.0)), _t41, _s_t41),
        ChainSpec("C4.2a", "integral chain on [mu, 1/2]", "matrix", (_real("mu", 0.25),), _c42a, _s_c42a),
        ChainSpec("C4.2b", "integral chain on [0, mu]", "matrix", (_real("mu", 0.25),), _c42b, _s_c42b,
                  requires_square=True),
        ChainSpec(
            "C4.3",
            "six-term matrix analogue of the Heinz inequality",
            "matrix",
            (Param("alpha", "alpha in [0, 1], alpha < beta", 0.0, check=_unit),
             Param("beta", "beta in [0, 1], alpha < beta", 1.0, check=_unit)),
            _c43,
            _s_c43,
            requires_square=True,
        ),
        ChainSpec("K-r0", "bound with r0 = min(nu, 1-nu), norms outside", "matrix", (P_NU,), _kr0, _s_nu,
                  requires_square=True),
        ChainSpec("T4.5", "bound with r1 = min(nu, |1/2-nu|, 1-nu), norm outside", "matrix", (P_NU,), _t45,
                  _s_nu, requires_square=True),
        ChainSpec("C4.6", "four-step refinement ending at |||AX+XB|||", "matrix", (P_NU,), _c46, _s_nu,
                  requires_square=True),
        ChainSpec(
            "C4.7",
            "five-step chain ending at (2/(t+2))|||A^2X+tAXB+XB^2|||",
            "matrix",
            (Param("r", "r in [1/2, 3/2]", 1.0, check=lambda r: 0.5 <= r <= 1.5),
             Param("t_zhan", "t in (-2, 2]", 0.0, check=lambda t: -2.0 < t <= 2.0)),
            _c47,
            _s_c47,
            requires_square=True,
        ),
        ChainSpec("HK", "one-sided integral between geometric and arithmetic terms", "matrix", (), _hk, _s_none,
                  requires_square=True),
        ChainSpec("GLA", "geometric <= logarithmic <= arithmetic mean", "scalar",
                  (Param("a", "a > 0", 1.0, check=_positive), Param("b", "b > 0", math.e, check=_positive)),
                  _gla, _s_gla),
        ChainSpec("FALSIFY-r0", "the r0 bound with the norm outside fails on the published data", "fixed",
                  (Param("nu", "nu in [0, 1]", COUNTEREXAMPLE_NU, check=_unit),), _falsify, None,
                  expect=VIOLATED),
    ]
}
THEOREM_IDS = tuple(REGISTRY)


def get_spec(theorem_id: str) -> ChainSpec:
    try:
        return REGISTRY[theorem_id]
    except KeyError:
        raise KeyError(f"unknown theorem id {theorem_id!r}; known: {', '.join(THEOREM_IDS)}") from None


def evaluate_chain(
    theorem_id: str,
    subject=None,
    params: dict | None = None,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    rel_tol: float | None = None,
) -> ChainReport:
    """Evaluate one registered chain.

    ``subject`` is a :class:`HeinzInstance` or :class:`HeinzProfile` for matrix
    chains, and may also be a :class:`ConvexFn` for the scalar T3.x chains.
    GLA and FALSIFY-r0 ignore it.
    """
    spec = get_spec(theorem_id)
    prm = spec.resolve(params)
    if spec.subject in ("function", "matrix") and subject is None:
        raise ValueError(f"{theorem_id} needs a subject")
    if spec.requires_square and not isinstance(subject, ConvexFn):
        inst = subject.instance if isinstance(subject, HeinzProfile) else subject
        if not inst.is_square:
            raise ValueError(f"{theorem_id} involves AX + XB and needs A, B of equal size")
    labels, values, degenerate, diag = spec.evaluate(subject, prm, cfg)
    shown = {k: v for k, v in prm.items() if v is not None}
    return make_report(theorem_id, labels, values, shown, diag,
                       default_rel_tol() if rel_tol is None else rel_tol, degenerate)


def falsify_r0_generalization(cfg: QuadratureConfig = DEFAULT_CONFIG, nu: float = COUNTEREXAMPLE_NU) -> ChainReport:
    return evaluate_chain("FALSIFY-r0", params={"nu": nu}, cfg=cfg)


def sweep_F(profile, grid) -> list[tuple[float, float]]:
    """Table of ``(nu, F(nu))`` over a grid inside ``[0, 1]``."""
    grid = np.asarray(list(grid), dtype=float)
    if grid.size and (grid.min() < 0 or grid.max() > 1):
        raise ValueError("sweep grid must lie inside [0, 1]")
    if grid.size == 0:
        return []
    profile = _as_profile(profile)
    values = np.atleast_1d(profile.F(grid))
    return [(float(nu), float(v)) for nu, v in zip(grid, values)]


def list_theorems() -> list[dict]:
    return [
        {
            "id": spec.theorem_id,
            "title": spec.title,
            "subject": spec.subject,
            "expect": spec.expect,
            "requires_square": spec.requires_square,
            "params": [{"name": p.name, "range": p.description, "default": p.default} for p in spec.params],
        }
        for spec in REGISTRY.values()
    ]

