"""q-Taylor expansion in the Pochhammer powers ``(x - a)^{k,q}``.

For ``q > 1`` and a function with ``n + 1`` ``1/q``-derivatives,

    f(x) = sum_k q^{k(k-1)/2} (D_{1/q}^k f)(q^k a) / [k]_q! (x - a)^{k,q} + R_n(f)

with integral remainder

    R_n(f) = q^{n(n+1)/2} / [n]_q! int_a^x (D_{1/q}^{n+1} f)(q^n t) (x - t)^{n,q} d_{1/q} t.

The identity is exact for the Jackson integral, not only in the limit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _exact as ex
from .exceptions import QDomainError
from .funcrep import Polynomial, as_function
from .qarith import (
    as_q,
    q_factorial,
    q_pochhammer_power,
    truncated_q_power,
)
from .qcalc import DEFAULT_CONFIG, IntegralConfig, jackson_integral_ab, q_derivative_n

__all__ = [
    "QTaylorExpansion",
    "q_taylor_expand",
    "q_taylor_remainder",
    "remainder_constant",
    "composed_derivative",
]


def remainder_constant(n: int, q: float) -> float:
    """The factor ``q^{n(n+1)/2} / [n]_q!`` shared by all remainder kernels."""
    return q ** (n * (n + 1) / 2) / q_factorial(n, q)


def composed_derivative(f, n: int, q: float):
    """The function ``t -> (D_{1/q}^{n+1} f)(q^n t)``.

    Returned as a :class:`Polynomial` when ``f`` is one, else as a callable.
    """
    f = as_function(f)
    if isinstance(f, Polynomial):
        g = f
        for _ in range(n + 1):
            g = g.q_derivative(1.0 / q)
        return g.scaled(q**n)
    return lambda t: q_derivative_n(f, q**n * np.asarray(t, dtype=float), n + 1, 1.0 / q)


@dataclass(frozen=True)
class QTaylorExpansion:
    """Truncated q-Taylor polynomial about ``a``."""

    a: float
    n: int
    q: float
    coeffs: tuple

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for k, c in enumerate(self.coeffs):
            out = out + c * q_pochhammer_power(x, self.a, k, self.q)
        return float(out) if out.ndim == 0 else out


def q_taylor_expand(f, a: float, n: int, q) -> QTaylorExpansion:
    """Coefficients ``c_k = q^{k(k-1)/2} (D_{1/q}^k f)(q^k a) / [k]_q!``, ``k = 0..n``.

    Black-box functions are refused at ``a = 0``, where the ``1/q``-difference
    quotient is undefined.
    """
    q = as_q(q).require_reciprocal()
    if n < 0:
        raise QDomainError(f"expansion degree must be >= 0, got {n}")
    f = as_function(f)
    if a == 0 and not isinstance(f, Polynomial):
        raise QDomainError("expansion of a black-box function about a = 0 is undefined")
    coeffs = tuple(
        q ** (k * (k - 1) / 2) * float(q_derivative_n(f, q**k * a, k, 1.0 / q)) / q_factorial(k, q)
        for k in range(n + 1)
    )
    return QTaylorExpansion(float(a), n, q, coeffs)


def q_taylor_remainder(
    f,
    a: float,
    x: float,
    n: int,
    q,
    cfg: IntegralConfig = DEFAULT_CONFIG,
    *,
    form: str = "bounded",
    b: float | None = None,
):
    """Integral remainder ``R_n(f)`` of the q-Taylor expansion about ``a`` at ``x``.

    ``form="bounded"`` integrates the plain Pochhammer power over ``[a, x]``.
    ``form="truncated"`` integrates the truncated power ``(x - t)_+^{n,q}`` over
    ``[a, b]`` with ``b`` defaulting to ``x``.  The Jackson integral samples
    ``b q^-i``, so the two forms coincide when ``x`` is one of those points,
    ``x > 0`` and ``a <= x``.  The bounded form of a polynomial is computed
    in exact rational arithmetic.

    For black-box ``f`` the integrand is a literal difference quotient of
    order ``n + 1`` sampled down to ``t -> 0``, where rounding grows like
    ``eps / t^(n+1)``.  Beyond ``n = 0`` the series is then dominated by
    noise; pass polynomials (or a polynomial surrogate) for higher orders.
    """
    q = as_q(q).require_reciprocal()
    g = composed_derivative(f, n, q)
    c = remainder_constant(n, q)
    if form == "bounded":
        f = as_function(f)
        if isinstance(f, Polynomial):
            Q = ex.fr(q)
            ge = ex.composed_derivative(f.coeffs, n, Q)
            kernel = ex.pochhammer(ex.fr(x), n, Q)
            val = ex.integrate_terms([(ex.fr(a), ex.fr(x), kernel)], ge, 1 / Q)
            return float(ex.remainder_constant(n, Q) * val)
        integrand = lambda t: g(t) * q_pochhammer_power(x, t, n, q)
        return c * jackson_integral_ab(integrand, a, x, 1.0 / q, cfg)
    if form == "truncated":
        b = x if b is None else b
        integrand = lambda t: g(t) * truncated_q_power(x, t, n, q)
        return c * jackson_integral_ab(integrand, a, b, 1.0 / q, cfg)
    raise QDomainError(f"unknown remainder form {form!r}")

