"""Certified enclosures of digamma, log-gamma, gamma, and polygamma values.

The library evaluates truncated asymptotic expansions with exact
Bernoulli-polynomial coefficients under directed rounding, classifies each
truncation as a certified lower or upper bound, and shrinks enclosures to a
requested tolerance by shifting the argument with the functional equation.
"""

from .errors import DomainError, ToleranceError
from .rounding import Enclosure, Rounder, Scalar, to_rational
from .bernoulli import (
    BernoulliPolynomial,
    BoundDirection,
    RootBracket,
    bernoulli_number,
    bernoulli_poly,
    eval_poly,
    lambda0,
    validity,
)
from .expansions import (
    TruncationSpec,
    eval_gamma_approximant,
    eval_log_gamma_series,
    eval_log_gamma_series_derivative,
    eval_psi_series,
    first_omitted_term,
    next_nonzero_term_bound,
)
from .engine import Plan, Query, Target, bound_derivative_side, bound_psi_side, enclose, plan, shift_sum

__all__ = [
    "DomainError",
    "ToleranceError",
    "Enclosure",
    "Rounder",
    "Scalar",
    "to_rational",
    "BernoulliPolynomial",
    "BoundDirection",
    "RootBracket",
    "bernoulli_number",
    "bernoulli_poly",
    "eval_poly",
    "lambda0",
    "validity",
    "TruncationSpec",
    "eval_gamma_approximant",
    "eval_log_gamma_series",
    "eval_log_gamma_series_derivative",
    "eval_psi_series",
    "first_omitted_term",
    "next_nonzero_term_bound",
    "Plan",
    "Query",
    "Target",
    "bound_derivative_side",
    "bound_psi_side",
    "enclose",
    "plan",
    "shift_sum",
]

__version__ = "0.1.0"
