"""q-derivatives, Jackson integrals, q-norms and the q-mean-value search.

Conventions
-----------
``q_derivative(f, t, q)`` is the plain base-``q`` quotient; pass ``1/q`` for
the ``D_{1/q}`` derivative.  ``jackson_integral_0b`` and
``jackson_integral_ab`` take the series base in (0, 1) directly.  The norm,
Hölder and mean-value helpers follow the ``d_{1/q}`` orientation and take
``q > 1``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .exceptions import JacksonConvergenceWarning, QDomainError, SignChangeError
from .funcrep import PiecewisePolynomial, Polynomial, as_function
from .qarith import as_q, q_int

__all__ = [
    "IntegralConfig",
    "DEFAULT_CONFIG",
    "JacksonResult",
    "q_derivative",
    "q_derivative_n",
    "jackson_integral_0b",
    "jackson_integral_ab",
    "jackson_nodes",
    "polynomial_jackson_integral",
    "q_norm",
    "holder_check",
    "mean_value_xi",
    "solve_level",
]

_TINY = np.finfo(float).tiny


@dataclass(frozen=True)
class IntegralConfig:
    """Truncation settings for Jackson series."""

    rel_tol: float = 1e-14
    max_terms: int = 100_000

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0:
            raise QDomainError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")
        if int(self.max_terms) < 1:
            raise QDomainError(f"max_terms must be >= 1, got {self.max_terms}")


DEFAULT_CONFIG = IntegralConfig()


class JacksonResult(NamedTuple):
    value: float
    terms: int
    converged: bool


def q_derivative(f, t, q):
    """``D_q f(t) = (f(qt) - f(t)) / ((q - 1) t)``.

    Polynomials use the exact coefficient rule, which also covers ``t = 0``.
    Other variants raise :class:`QDomainError` at ``t = 0``.
    """
    return q_derivative_n(f, t, 1, q)


def q_derivative_n(f, t, n: int, q):
    """n-fold q-derivative ``D_q^n f(t)``.

    Black-box functions go through the literal recursion, which samples
    ``f`` at ``t, qt, ..., q^n t``.  The quotient loses roughly ``n`` orders
    of magnitude per decade of ``|t|`` below 1 to cancellation, which is
    inherent to the definition.
    """
    q = as_q(q).q
    if q == 1.0:
        raise QDomainError("q-derivatives need q != 1")
    if n < 0:
        raise QDomainError(f"derivative order must be >= 0, got {n}")
    f = as_function(f)
    if isinstance(f, Polynomial):
        for _ in range(n):
            f = f.q_derivative(q)
        return f(t)
    t = np.asarray(t, dtype=float)
    if n == 0:
        return f(t)
    if np.any(t == 0.0):
        raise QDomainError("the q-difference quotient of a non-polynomial is undefined at t = 0")
    vals = [np.asarray(f(t * q**j), dtype=float) for j in range(n + 1)]
    for _ in range(n):
        vals = [(vals[j + 1] - vals[j]) / ((q - 1.0) * t * q**j) for j in range(len(vals) - 1)]
    out = vals[0]
    return float(out) if out.ndim == 0 else out


def polynomial_jackson_integral(coeffs, a: float, b: float, base: float) -> float:
    """Closed form of the Jackson integral of a polynomial over ``[a, b]``.

    ``int_0^b x^k d_base x = b^(k+1) / [k+1]_base``; this is the exact sum of
    the Jackson series and does not depend on where the sample lattice falls.
    """
    total = [c * (b ** (k + 1) - a ** (k + 1)) / q_int(k + 1, base) for k, c in enumerate(coeffs)]
    return math.fsum(total)


def jackson_nodes(b: float, base: float, terms: int):
    """Sample points ``b base^i`` and weights ``(1 - base) b base^i``."""
    powers = base ** np.arange(terms, dtype=float)
    return b * powers, (1.0 - base) * b * powers


def _series_0b(func, b, base, cfg, chunk=64):
    """Sum the Jackson series of ``func`` on ``[0, b]``, vectorized in chunks."""
    if b == 0.0:
        return JacksonResult(0.0, 0, True)
    total = 0.0
    comp = 0.0  # Kahan compensation
    run = 0
    i0 = 0
    max_terms = int(cfg.max_terms)
    while i0 < max_terms:
        m = min(chunk, max_terms - i0)
        idx = np.arange(i0, i0 + m, dtype=float)
        powers = base**idx
        pts = b * powers
        live = np.abs(pts) >= _TINY
        if not np.all(live):
            m = int(np.argmin(live))
            if m == 0:
                return JacksonResult(total, i0, True)
            idx, powers, pts = idx[:m], powers[:m], pts[:m]
        vals = np.asarray(func(pts), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise QDomainError("integrand is not finite at a Jackson sample point")
        terms = (1.0 - base) * b * powers * vals
        for k in range(len(terms)):
            y = terms[k] - comp
            s = total + y
            comp = (s - total) - y
            total = s
            if total != 0.0:
                small = abs(terms[k]) <= cfg.rel_tol * abs(total)
            else:
                # nothing accumulated yet: only the vanishing tail weight counts
                small = powers[k] <= cfg.rel_tol
            run = run + 1 if small else 0
            if run >= 3:
                return JacksonResult(float(total), i0 + k + 1, True)
        if len(terms) < chunk and not np.all(live):
            return JacksonResult(total, i0 + len(terms), True)
        i0 += len(terms)
        chunk = min(chunk * 2, 8192)
    return JacksonResult(float(total), max_terms, False)


def _check_base(base) -> float:
    return as_q(base).require_series_base()


def jackson_integral_0b(f, b: float, base, cfg: IntegralConfig = DEFAULT_CONFIG, full_output=False):
    """Jackson integral ``int_0^b f(x) d_base x = (1-base) b sum base^i f(base^i b)``.

    Negative ``b`` is allowed; the series is applied verbatim.  Polynomials
    are integrated in closed form.  Other functions are summed until three
    consecutive terms fall below ``rel_tol`` times the running sum, or until
    ``max_terms``, in which case a :class:`JacksonConvergenceWarning` is
    emitted.  With ``full_output`` a :class:`JacksonResult` is returned.
    """
    base = _check_base(base)
    b = float(b)
    if not math.isfinite(b):
        raise QDomainError(f"only finite endpoints are supported, got b = {b}")
    f = as_function(f)
    if isinstance(f, Polynomial):
        res = JacksonResult(polynomial_jackson_integral(f.coeffs, 0.0, b, base), 0, True)
    else:
        res = _series_0b(f, b, base, cfg)
        if not res.converged:
            warnings.warn(
                f"Jackson series on [0, {b}] with base {base} did not converge in {cfg.max_terms} terms",
                JacksonConvergenceWarning,
                stacklevel=2,
            )
    return res if full_output else res.value


def jackson_integral_ab(f, a: float, b: float, base, cfg: IntegralConfig = DEFAULT_CONFIG):
    """Signed Jackson integral ``int_0^b - int_0^a``; ``a > b`` is allowed."""
    if a == b:
        return 0.0
    return jackson_integral_0b(f, b, base, cfg) - jackson_integral_0b(f, a, base, cfg)


def q_norm(f, b: float, p: float, q, cfg: IntegralConfig = DEFAULT_CONFIG) -> float:
    """``||f||_{p,q}`` on ``[0, b]`` with respect to ``d_{1/q}``.

    For ``p = inf`` the supremum is taken over the Jackson sample points
    ``b q^-i`` plus the breakpoints of a piecewise ``f`` inside ``[0, b]``; this
    discretization is a lower bound for the true supremum.
    """
    q = as_q(q).require_reciprocal()
    if not b > 0:
        raise QDomainError(f"q-norms need b > 0, got {b}")
    if not p >= 1:
        raise QDomainError(f"q-norms need p >= 1, got {p}")
    f = as_function(f)
    if math.isinf(p):
        return _discrete_sup(f, b, 1.0 / q, cfg)
    val = jackson_integral_0b(lambda x: np.abs(f(x)) ** p, b, 1.0 / q, cfg)
    return val ** (1.0 / p)


def _discrete_sup(f, b, base, cfg):
    n = _series_length(base, cfg)
    pts, _ = jackson_nodes(b, base, n)
    pts = pts[np.abs(pts) >= _TINY]
    if isinstance(f, PiecewisePolynomial):
        extra = [x for x in f.breakpoints if 0 <= x <= b]
        pts = np.concatenate([pts, extra])
    return float(np.max(np.abs(f(pts))))


def _series_length(base, cfg):
    """Number of Jackson terms after which the geometric weights fall below rel_tol."""
    n = math.ceil(math.log(cfg.rel_tol) / math.log(base)) + 3
    if n > cfg.max_terms:
        warnings.warn(
            f"base {base} needs {n} Jackson terms, truncating at {cfg.max_terms}",
            JacksonConvergenceWarning,
            stacklevel=3,
        )
        n = int(cfg.max_terms)
    return n


def holder_check(f, g, x: float, p1: float, p2: float, q, cfg: IntegralConfig = DEFAULT_CONFIG):
    """Both sides of the q-Hölder inequality on ``[0, x]``.

    Returns ``(lhs, rhs)`` with ``lhs = int_0^x |f g| d_{1/q}t`` and
    ``rhs = ||f||_{p1} ||g||_{p2}``.
    """
    if not (p1 > 1 and p2 > 1):
        raise QDomainError("Hölder exponents must exceed 1")
    conj = (0.0 if math.isinf(p1) else 1.0 / p1) + (0.0 if math.isinf(p2) else 1.0 / p2)
    if abs(conj - 1.0) > 1e-12:
        raise QDomainError(f"exponents are not conjugate: 1/p1 + 1/p2 = {conj}")
    q = as_q(q).require_reciprocal()
    f, g = as_function(f), as_function(g)
    lhs = jackson_integral_0b(lambda t: np.abs(f(t) * g(t)), x, 1.0 / q, cfg)
    rhs = q_norm(f, x, p1, q, cfg) * q_norm(g, x, p2, q, cfg)
    return lhs, rhs


def _sign_samples(G, a, b, q, cfg):
    base = 1.0 / q
    n = _series_length(base, cfg)
    pts = []
    for end in (a, b):
        if end != 0.0:
            nodes, _ = jackson_nodes(end, base, n)
            pts.append(nodes[(nodes >= min(a, b)) & (nodes <= max(a, b))])
    pts.append(np.linspace(a, b, 1025))
    if isinstance(G, PiecewisePolynomial):
        pts.append([x for x in G.breakpoints if a <= x <= b])
    pts = np.concatenate(pts)
    return np.asarray(G(pts), dtype=float)


def solve_level(F, target: float, a: float, b: float, cells: int = 1024):
    """Find ``xi`` in ``(a, b)`` with ``F(xi) = target``, or ``None``.

    A uniform scan brackets sign changes of ``F - target`` which are then
    refined with Brent's method.  A root is accepted when
    ``|F(xi) - target| <= 1e-10 (1 + |target|)``.
    """
    F = as_function(F)
    tol = 1e-10 * (1.0 + abs(target))
    grid = np.linspace(a, b, cells + 1)
    # keep the scan off the endpoints and off t = 0, where black-box
    # q-derivatives are undefined
    nudge = 1e-12 * (b - a)
    grid[0] += nudge
    grid[-1] -= nudge
    grid[grid == 0.0] = nudge
    vals = np.asarray(F(grid), dtype=float) - target
    interior = np.abs(vals[1:-1]) <= tol
    if np.any(interior):
        return float(grid[1 + int(np.argmax(interior))])
    for i in range(cells):
        lo, hi = vals[i], vals[i + 1]
        if np.sign(lo) * np.sign(hi) < 0:
            xi = brentq(lambda s: float(F(s)) - target, grid[i], grid[i + 1], xtol=1e-15)
            if abs(float(F(xi)) - target) <= tol and a < xi < b:
                return float(xi)
    return None


def mean_value_xi(F, G, a: float, b: float, q, cfg: IntegralConfig = DEFAULT_CONFIG):
    """Point ``xi`` with ``int F G d_{1/q} = F(xi) int G d_{1/q}`` on ``[a, b]``.

    ``G`` must be one-signed on ``[a, b]`` (checked by sampling; a sign change
    raises :class:`SignChangeError`).  Existence is only guaranteed for ``q``
    beyond an unknown threshold, so ``None`` is a legitimate outcome.
    """
    q = as_q(q).require_reciprocal()
    F, G = as_function(F), as_function(G)
    gv = _sign_samples(G, a, b, q, cfg)
    if np.any(gv > 0) and np.any(gv < 0):
        raise SignChangeError("G changes sign on [a, b]")
    den = jackson_integral_ab(G, a, b, 1.0 / q, cfg)
    if den == 0.0:
        raise QDomainError("int G d_(1/q) vanishes; the mean value is undefined")
    num = jackson_integral_ab(lambda t: F(t) * G(t), a, b, 1.0 / q, cfg)
    return solve_level(F, num / den, a, b)
