"""Numerical verification of Heinz-type inequalities for unitarily invariant norms."""

from .chains import ChainReport, evaluate_chain, falsify_r0_generalization, list_theorems, sweep_F
from .harness import SuiteConfig, SuiteResult, emit_report, make_instance, run_suite
from .heinz import HeinzInstance, HeinzProfile, F_value, heinz_integral, heinz_scalar, heinz_term, log_mean
from .hh import ConvexFn, convex
from .linalg import PDMatrix, fractional_power, hermitian_eig, random_instance, singular_values
from .norms import NormKind, parse_norm, unorm
from .quadrature import QuadratureConfig, integrate_matrix, integrate_scalar

__version__ = "0.1.0"

__all__ = [
    "ChainReport", "ConvexFn", "F_value", "HeinzInstance", "HeinzProfile", "NormKind", "PDMatrix",
    "QuadratureConfig", "SuiteConfig", "SuiteResult", "convex", "emit_report", "evaluate_chain",
    "falsify_r0_generalization", "fractional_power", "heinz_integral", "heinz_scalar", "heinz_term",
    "hermitian_eig", "integrate_matrix", "integrate_scalar", "list_theorems", "log_mean", "make_instance", "parse_norm",
    "random_instance", "run_suite", "singular_values", "sweep_F", "unorm",
]
