"""Divided differences and q-B-splines.

The q-B-spline of degree ``n`` on knots ``t_k < ... < t_{k+n+1}`` is

    N_{k,n}(t; q) = (t_{k+n+1} - t_k) [t_k, ..., t_{k+n+1}]_x (x - t)_+^{n,q},

the divided difference acting on ``x`` with ``t`` held fixed.  It is the
Peano kernel of the divided difference functional, so for ``q > 1``

    f[t_0, ..., t_{n+1}] = q^{n(n+1)/2} / [n]_q!
        int N_{0,n}(t; q) / (t_{n+1} - t_0) (D_{1/q}^{n+1} f)(q^n t) d_{1/q} t.

For black-box ``f`` the integrand needs ``D_{1/q}^{n+1} f`` close to
``t = 0``, where the difference quotient cancels catastrophically; the
identity is numerically meaningful for polynomial ``f`` or small ``n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import QDomainError
from . import _exact as ex
from .funcrep import PiecewisePolynomial, Polynomial, as_function
from .interp import KnotVector, as_knots
from .peano import integrate_terms
from .qarith import as_q, pochhammer_coeffs_in_t, truncated_q_power
from .qcalc import DEFAULT_CONFIG, IntegralConfig
from .qtaylor import composed_derivative, remainder_constant

__all__ = [
    "DividedDifferenceTable",
    "divided_difference",
    "divided_difference_symmetric",
    "q_bspline",
    "bspline_pieces",
    "bspline_piece_coeffs",
    "bspline_integral",
    "divdiff_integral_identity",
]


@dataclass(frozen=True)
class DividedDifferenceTable:
    """Triangular table with ``table[k][i] = f[t_i, ..., t_{i+k}]``."""

    knots: KnotVector
    values: tuple
    table: tuple

    @classmethod
    def build(cls, knots, values) -> "DividedDifferenceTable":
        knots = as_knots(knots)
        values = tuple(float(v) for v in np.ravel(values))
        if len(values) != len(knots):
            raise QDomainError(f"{len(knots)} knots but {len(values)} values")
        rows = [values]
        for k in range(1, len(knots)):
            prev = rows[-1]
            rows.append(
                tuple((prev[i + 1] - prev[i]) / (knots[i + k] - knots[i]) for i in range(len(prev) - 1))
            )
        return cls(knots, values, tuple(rows))

    @property
    def top(self) -> float:
        return self.table[-1][0]


def divided_difference(f, knots) -> float:
    """``f[t_0, ..., t_{n+1}]`` through the recursive table."""
    f = as_function(f)
    knots = as_knots(knots)
    return DividedDifferenceTable.build(knots, [f(t) for t in knots]).top


def divided_difference_symmetric(f, knots) -> float:
    """``sum_i f(t_i) / prod_{j != i} (t_i - t_j)``."""
    f = as_function(f)
    knots = as_knots(knots)
    terms = []
    for i, ti in enumerate(knots):
        den = math.prod(ti - tj for j, tj in enumerate(knots) if j != i)
        terms.append(float(f(ti)) / den)
    return math.fsum(terms)


def _window(knots, k: int, n: int) -> KnotVector:
    knots = as_knots(knots)
    if k < 0 or n < 0 or k + n + 1 >= len(knots):
        raise QDomainError(f"N_{{{k},{n}}} needs knots t_{k}..t_{k + n + 1}; only {len(knots)} given")
    return KnotVector(knots[k : k + n + 2])


def q_bspline(k: int, n: int, knots, t, q):
    """``N_{k,n}(t; q)`` from the symmetric sum over its ``n + 2`` knots.

    ``q = 1`` gives the classical B-spline.
    """
    win = _window(knots, k, n)
    q = as_q(q).q
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    for i, ti in enumerate(win):
        den = math.prod(ti - tj for j, tj in enumerate(win) if j != i)
        out = out + truncated_q_power(ti, t, n, q) / den
    out = (win[-1] - win[0]) * out
    # at and left of t_k every term is a full degree-n polynomial in x
    out = np.where(t <= win[0], 0.0, out)
    return float(out) if out.ndim == 0 else out


def _poly_coeffs_exact(x, n: int, q) -> list:
    """Ascending coefficients in ``t`` of ``(x - t)^{n,q}`` in the input number type."""
    coeffs = [1]
    for j in range(n):
        nxt = [0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] += c * x
            nxt[i + 1] -= c * q**j
        coeffs = nxt
    return coeffs


def bspline_piece_coeffs(k: int, n: int, knots, q) -> list:
    """Coefficient lists of the pieces of ``N_{k,n}`` between consecutive knots.

    Pure Python arithmetic: pass :class:`fractions.Fraction` knots and ``q``
    for exact pieces.
    """
    _window(knots, k, n)
    win = list(knots)[k : k + n + 2]
    span = win[-1] - win[0]
    terms = []
    for i, ti in enumerate(win):
        den = math.prod(ti - tj for j, tj in enumerate(win) if j != i)
        terms.append((ti, [c * span / den for c in _poly_coeffs_exact(ti, n, q)]))
    pieces = []
    for v in win[1:]:
        acc = [0 * span] * (n + 1)
        for ti, c in terms:
            if v <= ti:
                acc = [a + b for a, b in zip(acc, c)]
        pieces.append(acc)
    return pieces


def bspline_pieces(k: int, n: int, knots, q) -> PiecewisePolynomial:
    """``N_{k,n}(.; q)`` as a :class:`PiecewisePolynomial` over its support."""
    win = _window(knots, k, n)
    pieces = bspline_piece_coeffs(k, n, win, as_q(q).q)
    return PiecewisePolynomial(win, pieces, 0.0)


def bspline_integral(k: int, n: int, knots, q) -> float:
    """``int N_{k,n}(t; q) d_{1/q} t`` over the support, piece by piece.

    Equals ``(t_{k+n+1} - t_k) / [n+1]_q``.  The pieces cancel heavily for
    clustered knots, so the sum runs in exact rational arithmetic on the
    (exactly converted) float inputs.
    """
    q = as_q(q).require_reciprocal()
    win = [ex.fr(t) for t in _window(knots, k, n)]
    Q = ex.fr(q)
    pieces = bspline_piece_coeffs(0, n, win, Q)
    total = sum(ex.jackson_poly(c, u, v, 1 / Q) for u, v, c in zip(win[:-1], win[1:], pieces))
    return float(total)


def divdiff_integral_identity(f, knots, q, cfg: IntegralConfig = DEFAULT_CONFIG) -> tuple:
    """Both sides of the divided-difference integral identity.

    Returns ``(lhs, rhs)`` with ``lhs = f[t_0, ..., t_{n+1}]`` for ``n + 2``
    knots and ``rhs`` the kernel integral against ``(D_{1/q}^{n+1} f)(q^n t)``.
    The kernel vanishes outside ``[t_0, t_{n+1}]``.  It is integrated term by
    term, ``(t_i - t)^{n,q}`` over ``[0, t_i]``: left of ``t_0`` the terms add
    up to a divided difference of a degree ``n`` polynomial, which is zero.
    Polynomial ``f`` is handled in exact rational arithmetic.
    """
    knots = as_knots(knots)
    if len(knots) < 2:
        raise QDomainError("the identity needs at least two knots")
    q = as_q(q).require_reciprocal()
    n = len(knots) - 2
    lhs = divided_difference(f, knots)
    f = as_function(f)
    if isinstance(f, Polynomial):
        Q = ex.fr(q)
        xs = [ex.fr(t) for t in knots]
        c0 = ex.remainder_constant(n, Q)
        terms = []
        for i, ti in enumerate(xs):
            den = math.prod((ti - tj for j, tj in enumerate(xs) if j != i), start=ex.Fraction(1))
            terms.append((ex.Fraction(0), ti, [c0 * v / den for v in ex.pochhammer(ti, n, Q)]))
        g = ex.composed_derivative(f.coeffs, n, Q)
        return lhs, float(ex.integrate_terms(terms, g, 1 / Q))
    c0 = remainder_constant(n, q)
    terms = []
    for i, ti in enumerate(knots):
        den = math.prod(ti - tj for j, tj in enumerate(knots) if j != i)
        terms.append((0.0, ti, c0 / den * pochhammer_coeffs_in_t(ti, n, q)))
    g = composed_derivative(f, n, q)
    return lhs, integrate_terms(terms, g, q, cfg)
