"""Norm, compactness and approximation-number bounds for weighted Laplace-type operators

    (Lf)(x) = integral_0^inf exp(-x y^lam) f(y) v(y) dy,   L^p -> L^q on the half-line,

with a dense discretization used as an independent check.
"""

from ._backend import NAME as backend
from .criteria import BoundReport, compactness_test, hilbert_schmidt_exact, norm_criterion, schatten_X_alpha
from .kernel import SpaceParams, derived_params, tail_integral, tail_integral_lower_C1
from .localnorm import A0, A1, B0, B1, B2, B3, B4, Interval, K_bounds, K_report, K_upper, gamma_constants
from .partition import Partition, an_curve, an_upper, apply_finite_rank, split
from .schatten import (
    DyadicProfile,
    J_bar_s,
    J_s,
    Lambda_s,
    alpha_pq,
    asymptotic_constant,
    dyadic_lemma_check,
    hardy_apply,
    hardy_const_norm,
    lambda_J_equivalence_check,
    schatten_upper_report,
    sigma_profile,
)
from .weights import Weight

__version__ = "0.1.0"

__all__ = [
    "backend", "BoundReport", "compactness_test", "hilbert_schmidt_exact", "norm_criterion", "schatten_X_alpha",
    "SpaceParams", "derived_params", "tail_integral", "tail_integral_lower_C1", "A0", "A1", "B0", "B1", "B2",
    "B3", "B4", "Interval", "K_bounds", "K_report", "K_upper", "gamma_constants", "Partition", "an_curve",
    "an_upper", "apply_finite_rank", "split", "DyadicProfile", "J_bar_s", "J_s", "Lambda_s", "alpha_pq",
    "asymptotic_constant", "dyadic_lemma_check", "hardy_apply", "hardy_const_norm", "lambda_J_equivalence_check",
    "schatten_upper_report", "sigma_profile", "Weight",
]
