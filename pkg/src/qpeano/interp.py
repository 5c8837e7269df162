"""Lagrange interpolation error and its q-Kowalewski remainder.

For distinct nodes ``t_0 < ... < t_n`` and ``0 <= m <= n``,

    f(x) - sum_k f(t_k) l_k(x)
        = q^{m(m+1)/2} / [m]_q! sum_k l_k(x) int_{t_k}^x (t_k - t)^{m,q} (D_{1/q}^{m+1} f)(q^m t) d_{1/q} t.

The two hand-written kernels below are fixtures for three-node
interpolation on ``{-1, 0, 1}`` (quadratic, ``m = 2``) and on ``{0, 2, 4}``
(``m = 1``).  They return ``L_x[(x - t)_+^{m,q}]`` without the factor
``q^{m(m+1)/2} / [m]_q!``.
"""

from __future__ import annotations

import math

import numpy as np

from . import _exact as ex
from .exceptions import QDomainError
from .funcrep import Polynomial, as_function
from .peano import LinearFunctional
from .qarith import as_q, q_pochhammer_power
from .qcalc import DEFAULT_CONFIG, IntegralConfig, jackson_integral_ab
from .qtaylor import composed_derivative, remainder_constant

__all__ = [
    "KnotVector",
    "as_knots",
    "lagrange_basis",
    "interp_error_direct",
    "interpolation_error_functional",
    "kowalewski_remainder",
    "example1_kernel",
    "example2_kernel",
]


class KnotVector(tuple):
    """Strictly increasing tuple of finite reals."""

    def __new__(cls, nodes):
        vals = tuple(float(v) for v in np.ravel(nodes))
        if not vals:
            raise QDomainError("a knot vector needs at least one node")
        if not all(math.isfinite(v) for v in vals):
            raise QDomainError("knots must be finite")
        if any(u >= v for u, v in zip(vals, vals[1:])):
            raise QDomainError(f"knots must be strictly increasing and distinct, got {vals}")
        return super().__new__(cls, vals)


def as_knots(nodes) -> KnotVector:
    return nodes if isinstance(nodes, KnotVector) else KnotVector(nodes)


def lagrange_basis(nodes, k: int, x):
    """``l_k(x) = prod_{v != k} (x - t_v) / (t_k - t_v)``."""
    nodes = as_knots(nodes)
    if not 0 <= k < len(nodes):
        raise QDomainError(f"basis index {k} out of range for {len(nodes)} nodes")
    x = np.asarray(x, dtype=float)
    out = np.ones_like(x)
    tk = nodes[k]
    for v, tv in enumerate(nodes):
        if v != k:
            out = out * (x - tv) / (tk - tv)
    return float(out) if out.ndim == 0 else out


def interp_error_direct(f, nodes, x: float) -> float:
    """``f(x) - sum_k f(t_k) l_k(x)``."""
    f = as_function(f)
    nodes = as_knots(nodes)
    terms = [float(f(x))] + [-float(f(tk)) * lagrange_basis(nodes, k, x) for k, tk in enumerate(nodes)]
    return math.fsum(terms)


def interpolation_error_functional(nodes, x: float, q, domain=None) -> LinearFunctional:
    """The error functional ``f -> f(x) - sum f(t_k) l_k(x)`` as a LinearFunctional."""
    nodes = as_knots(nodes)
    if domain is None:
        domain = (min(nodes[0], x), max(nodes[-1], x))
        if domain[0] == domain[1]:
            domain = (domain[0], domain[0] + 1.0)
    pts = [(1.0, x)] + [(-lagrange_basis(nodes, k, x), tk) for k, tk in enumerate(nodes)]
    return LinearFunctional(pts, (), domain, as_q(q).q)


def kowalewski_remainder(f, nodes, x: float, m: int | None, q, cfg: IntegralConfig = DEFAULT_CONFIG) -> float:
    """Interpolation error through the q-Kowalewski formula.

    Each ``int_{t_k}^x`` is a signed Jackson integral, so nodes on either
    side of ``x`` need no special handling.  ``m`` defaults to ``n``.
    Polynomials are handled in exact rational arithmetic.
    """
    nodes = as_knots(nodes)
    n = len(nodes) - 1
    m = n if m is None else int(m)
    if not 0 <= m <= n:
        raise QDomainError(f"m must lie in 0..{n}, got {m}")
    q = as_q(q).require_reciprocal()
    f = as_function(f)
    if isinstance(f, Polynomial):
        return float(_kowalewski_exact(f, nodes, x, m, q))
    g = composed_derivative(f, m, q)
    terms = []
    for k, tk in enumerate(nodes):
        lk = lagrange_basis(nodes, k, x)
        if lk == 0.0 or tk == x:
            continue
        integrand = lambda t, tk=tk: g(t) * q_pochhammer_power(tk, t, m, q)
        terms.append(lk * jackson_integral_ab(integrand, tk, x, 1.0 / q, cfg))
    return remainder_constant(m, q) * math.fsum(terms)


def _kowalewski_exact(f: Polynomial, nodes, x: float, m: int, q: float):
    Q, X = ex.fr(q), ex.fr(x)
    ts = [ex.fr(t) for t in nodes]
    g = ex.composed_derivative(f.coeffs, m, Q)
    total = ex.Fraction(0)
    for k, tk in enumerate(ts):
        lk = math.prod(((X - tv) / (tk - tv) for v, tv in enumerate(ts) if v != k), start=ex.Fraction(1))
        if lk:
            total += lk * ex.integrate_terms([(tk, X, ex.pochhammer(tk, m, Q))], g, 1 / Q)
    return ex.remainder_constant(m, Q) * total


def example1_kernel(x: float, t: float, q, *, as_printed: bool = False) -> float:
    """Quadratic interpolation on ``{-1, 0, 1}``; kernel bracket for ``m = 2``.

    With ``as_printed=True`` the branch for ``x >= 0, 0 <= t <= x`` carries the
    extra term ``-l_22(x)(1 - t)^{2,q}`` of the original typeset display; the
    default follows the integral decomposition it was derived from.
    """
    q = as_q(q).q
    pw = lambda s: q_pochhammer_power(s, t, 2, q)
    l0, l1, l2 = 0.5 * x * (x - 1.0), 1.0 - x * x, 0.5 * x * (x + 1.0)
    if x <= 0:
        if t <= x:
            return l0 * pw(-1.0)
        if t <= 0:
            return -l1 * pw(0.0) - l2 * pw(1.0)
        return -l2 * pw(1.0)
    if t <= 0:
        return l0 * pw(-1.0)
    if t <= x:
        out = l0 * pw(-1.0) + l1 * pw(0.0)
        return out - l2 * pw(1.0) if as_printed else out
    return -l2 * pw(1.0)


def example2_kernel(x: float, t: float, q=None, *, as_printed: bool = False) -> float:
    """Interpolation on ``{0, 2, 4}`` with ``m = 1``; kernel bracket.

    For ``m = 1`` the bracket does not depend on ``q``.  ``as_printed=True``
    reproduces the original typeset branches, which differ from the
    decomposition they were derived from in the middle branch for
    ``0 <= x < 2`` (sign of the ``l_21`` term) and in the last branch for
    ``2 <= x < 4`` (a spurious ``l_21`` term).
    """
    l0 = (x - 2.0) * (x - 4.0) / 8.0
    l1 = -x * (x - 4.0) / 4.0
    l2 = x * (x - 2.0) / 8.0
    if x < 2:
        if t < x:
            return -l0 * t
        if t < 2:
            sign = 1.0 if as_printed else -1.0
            return sign * l1 * (2.0 - t) - l2 * (4.0 - t)
        return -l2 * (4.0 - t)
    if t < 2:
        return -l0 * t
    if t < x:
        return -l0 * t + l1 * (2.0 - t)
    if as_printed:
        return l1 * (2.0 - t) - l2 * (4.0 - t)
    return -l2 * (4.0 - t)
