"""Quantum-calculus Peano kernels.

q-integers and Pochhammer powers, Jackson integrals, the q-Taylor formula
with integral remainder, Peano kernels of linear functionals annihilating
polynomials, the q-Kowalewski interpolation remainder, q-quadrature error
bounds and q-B-splines.  All integrals are ``d_{1/q}`` integrals with
``q > 1`` unless a series base is passed explicitly.
"""

from .exceptions import JacksonConvergenceWarning, NotAnnihilatingError, QDomainError, SignChangeError
from .funcrep import Builtin, PiecewisePolynomial, Polynomial, as_function, example2_spline
from .interp import (
    KnotVector,
    example1_kernel,
    example2_kernel,
    interp_error_direct,
    interpolation_error_functional,
    kowalewski_remainder,
    lagrange_basis,
)
from .peano import LinearFunctional, PeanoKernel, annihilation_degree, apply, kernel_value, mean_value_form, reconstruct
from .qarith import QParam, q_factorial, q_int, q_pochhammer_power, truncated_q_power
from .qcalc import (
    DEFAULT_CONFIG,
    IntegralConfig,
    holder_check,
    jackson_integral_0b,
    jackson_integral_ab,
    mean_value_xi,
    q_derivative,
    q_derivative_n,
    q_norm,
)
from .qspline import bspline_integral, divdiff_integral_identity, divided_difference, q_bspline
from .qtaylor import q_taylor_expand, q_taylor_remainder
from .quad import (
    QuadratureRule,
    optimize_weights_l2,
    q_trapezoid,
    quad_kernel,
    remainder_bound,
    trapezoid_error,
)

__version__ = "0.1.0"

__all__ = [
    "JacksonConvergenceWarning",
    "NotAnnihilatingError",
    "QDomainError",
    "SignChangeError",
    "Builtin",
    "PiecewisePolynomial",
    "Polynomial",
    "as_function",
    "example2_spline",
    "KnotVector",
    "example1_kernel",
    "example2_kernel",
    "interp_error_direct",
    "interpolation_error_functional",
    "kowalewski_remainder",
    "lagrange_basis",
    "LinearFunctional",
    "PeanoKernel",
    "annihilation_degree",
    "apply",
    "kernel_value",
    "mean_value_form",
    "reconstruct",
    "QParam",
    "q_factorial",
    "q_int",
    "q_pochhammer_power",
    "truncated_q_power",
    "DEFAULT_CONFIG",
    "IntegralConfig",
    "holder_check",
    "jackson_integral_0b",
    "jackson_integral_ab",
    "mean_value_xi",
    "q_derivative",
    "q_derivative_n",
    "q_norm",
    "bspline_integral",
    "divdiff_integral_identity",
    "divided_difference",
    "q_bspline",
    "q_taylor_expand",
    "q_taylor_remainder",
    "QuadratureRule",
    "optimize_weights_l2",
    "q_trapezoid",
    "quad_kernel",
    "remainder_bound",
    "trapezoid_error",
]
