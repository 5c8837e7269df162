"""Exact rational arithmetic for the polynomial paths.

Kernel integrals of polynomials are finite rational expressions in the float
inputs, but for large ``q`` and ``n`` the terms exceed the result by many
orders of magnitude.  Evaluating them with :class:`fractions.Fraction` and
rounding once keeps those paths accurate to the last bit of the inputs.
"""

from __future__ import annotations

from fractions import Fraction


def fr(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(float(x))


def q_int(k: int, q: Fraction) -> Fraction:
    return sum((q**j for j in range(k)), Fraction(0))


def q_factorial(k: int, q: Fraction) -> Fraction:
    out = Fraction(1)
    for j in range(1, k + 1):
        out *= q_int(j, q)
    return out


def polymul(a, b) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def pochhammer(x: Fraction, n: int, q: Fraction) -> list:
    """Ascending coefficients in ``t`` of ``prod_{j<n} (x - q^j t)``."""
    out = [Fraction(1)]
    for j in range(n):
        out = polymul(out, [x, -(q**j)])
    return out


def antiderivative(y: Fraction, n: int, q: Fraction) -> list:
    """Coefficients in ``t`` of ``(y - t/q)^{n+1,q} / [n+1]_{1/q}``."""
    c = pochhammer(y, n + 1, q)
    den = q_int(n + 1, 1 / q)
    return [ck / q**k / den for k, ck in enumerate(c)]


def remainder_constant(n: int, q: Fraction) -> Fraction:
    return q ** (n * (n + 1) // 2) / q_factorial(n, q)


def composed_derivative(coeffs, n: int, q: Fraction) -> list:
    """Coefficients of ``t -> (D_{1/q}^{n+1} f)(q^n t)``."""
    p = 1 / q
    c = [fr(v) for v in coeffs]
    for _ in range(n + 1):
        c = [c[k] * q_int(k, p) for k in range(1, len(c))]
    return [ck * q ** (n * k) for k, ck in enumerate(c)]


def jackson_poly(coeffs, u: Fraction, v: Fraction, base: Fraction) -> Fraction:
    """``int_u^v sum c_k t^k d_base t`` in closed form."""
    return sum(
        (ck * (v ** (k + 1) - u ** (k + 1)) / q_int(k + 1, base) for k, ck in enumerate(coeffs) if ck),
        Fraction(0),
    )


def integrate_terms(terms, g, base: Fraction) -> Fraction:
    """``sum_j int_{u_j}^{v_j} g P_j`` for exact ``(u_j, v_j, P_j)`` triples."""
    return sum((jackson_poly(polymul(g, c), u, v, base) for u, v, c in terms if u != v), Fraction(0))


def poly_value(coeffs, x: Fraction) -> Fraction:
    out = Fraction(0)
    for c in reversed(coeffs):
        out = out * x + c
    return out
