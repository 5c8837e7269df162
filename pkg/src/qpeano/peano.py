"""q-Peano kernels of linear functionals.

A :class:`LinearFunctional` is a finite combination of point evaluations and
definite ``d_{1/q}`` integrals on a domain ``[a, b]``.  If it annihilates
polynomials of degree ``n`` then, for every ``f`` with ``n + 1``
``1/q``-derivatives,

    L(f) = int_a^b (D_{1/q}^{n+1} f)(q^n t) K(t) d_{1/q} t,
    K(t) = q^{n(n+1)/2} / [n]_q! * L_x[(x - t)_+^{n,q}].

The kernel is a piecewise polynomial in ``t`` whose breakpoints are the
evaluation points and integration endpoints of ``L``.  Because a Jackson
integral samples its integrand below the interval it is taken over, the
integral above is accumulated piece by piece, each piece integrating its own
polynomial against the derivative.  Done this way the identity is exact for
any evaluation points; integrating ``K`` as a single Jackson series over
``[a, b]`` agrees only when all breakpoints lie on the sample lattice
``{a q^-i} U {b q^-i}``.

For an integral term ``w int_alpha^beta`` the kernel contribution uses the
q-antiderivative ``F_y(t) = (y - t/q)^{n+1,q} / [n+1]_{1/q}`` of
``x -> (x - t)^{n,q}``: ``w (F_beta - F_alpha)`` for ``t < alpha`` and
``w F_beta`` for ``alpha <= t < beta``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _exact as ex
from .exceptions import NotAnnihilatingError, QDomainError, SignChangeError
from .funcrep import PiecewisePolynomial, Polynomial, as_function
from .qarith import (
    as_q,
    pochhammer_coeffs_in_t,
    q_factorial,
    q_int,
    q_pochhammer_power,
    truncated_q_power,
)
from .qcalc import (
    DEFAULT_CONFIG,
    IntegralConfig,
    jackson_integral_ab,
    jackson_nodes,
    polynomial_jackson_integral,
    solve_level,
)
from .qtaylor import composed_derivative, remainder_constant

__all__ = [
    "LinearFunctional",
    "PeanoKernel",
    "MeanValueForm",
    "apply",
    "annihilation_degree",
    "kernel_value",
    "reconstruct",
    "mean_value_form",
    "integrate_against",
    "integrate_terms",
]

P = np.polynomial.polynomial


@dataclass(frozen=True)
class LinearFunctional:
    """``L(f) = sum c_i f(x_i) + sum w_j int_{a_j}^{b_j} f d_{1/q}``.

    ``point_terms`` holds ``(c_i, x_i)`` pairs and ``integral_terms`` holds
    ``(w_j, a_j, b_j)`` triples, all located inside ``domain``.
    """

    point_terms: tuple = ()
    integral_terms: tuple = ()
    domain: tuple = (0.0, 1.0)
    q: float = 2.0

    def __post_init__(self):
        q = as_q(self.q).require_reciprocal()
        a, b = (float(v) for v in self.domain)
        if not a < b:
            raise QDomainError(f"domain must satisfy a < b, got {self.domain}")
        pts = tuple((float(c), float(x)) for c, x in self.point_terms)
        ints = tuple((float(w), float(lo), float(hi)) for w, lo, hi in self.integral_terms)
        locs = [x for _, x in pts] + [v for _, lo, hi in ints for v in (lo, hi)]
        if any(not a <= v <= b for v in locs):
            raise QDomainError(f"all evaluation points and endpoints must lie in [{a}, {b}]")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "domain", (a, b))
        object.__setattr__(self, "point_terms", pts)
        object.__setattr__(self, "integral_terms", ints)

    def __call__(self, f, cfg: IntegralConfig = DEFAULT_CONFIG) -> float:
        return apply(self, f, cfg)

    @property
    def breakpoints(self) -> list:
        a, b = self.domain
        locs = {a, b}
        locs.update(x for _, x in self.point_terms)
        for _, lo, hi in self.integral_terms:
            locs.update((lo, hi))
        return sorted(locs)

    def scale(self, k: int = 0) -> float:
        """Magnitude used to judge whether ``L(x^k)`` is numerically zero."""
        radius = max(1.0, *(abs(v) for v in self.domain))
        s = 1.0 + sum(abs(c) for c, _ in self.point_terms)
        s += sum(abs(w) * abs(hi - lo) for w, lo, hi in self.integral_terms)
        return s * radius**k

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "domain": list(self.domain),
            "points": [list(t) for t in self.point_terms],
            "integrals": [list(t) for t in self.integral_terms],
        }

    @classmethod
    def from_json(cls, obj) -> "LinearFunctional":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            return cls(
                point_terms=obj.get("points", []),
                integral_terms=obj.get("integrals", []),
                domain=obj["domain"],
                q=obj["q"],
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, QDomainError):
                raise
            raise QDomainError(f"malformed functional: {exc}") from exc


def apply(L: LinearFunctional, f, cfg: IntegralConfig = DEFAULT_CONFIG) -> float:
    """``sum c_i f(x_i) + sum w_j int_{a_j}^{b_j} f d_{1/q}``.

    Polynomials are evaluated in exact rational arithmetic.
    """
    f = as_function(f)
    if isinstance(f, Polynomial):
        c = [ex.fr(v) for v in f.coeffs]
        base = 1 / ex.fr(L.q)
        total = sum((ex.fr(ci) * ex.poly_value(c, ex.fr(x)) for ci, x in L.point_terms), ex.Fraction(0))
        for w, lo, hi in L.integral_terms:
            total += ex.fr(w) * ex.jackson_poly(c, ex.fr(lo), ex.fr(hi), base)
        return float(total)
    terms = [c * float(f(x)) for c, x in L.point_terms]
    terms += [w * jackson_integral_ab(f, lo, hi, 1.0 / L.q, cfg) for w, lo, hi in L.integral_terms]
    return math.fsum(terms)


def annihilation_degree(L: LinearFunctional, max_n: int = 20, tol: float = 1e-9) -> int:
    """Largest ``n <= max_n`` such that ``L`` kills ``1, x, ..., x^n``; -1 if ``L(1) != 0``.

    ``|L(x^k)|`` is compared with ``tol * L.scale(k)``.
    """
    if max_n < 0:
        raise QDomainError("max_n must be >= 0")
    for k in range(max_n + 1):
        mono = Polynomial([0.0] * k + [1.0])
        if abs(apply(L, mono)) > tol * L.scale(k):
            return k - 1
    return max_n


def _antiderivative_coeffs(y: float, n: int, q: float) -> np.ndarray:
    """Coefficients in ``t`` of ``(y - t/q)^{n+1,q} / [n+1]_{1/q}``."""
    c = pochhammer_coeffs_in_t(y, n + 1, q)
    return c * q ** -np.arange(len(c)) / q_int(n + 1, 1.0 / q)


class PeanoKernel:
    """Kernel ``t -> K(t)`` of a functional annihilating polynomials of degree ``n``.

    Construction verifies the annihilation hypothesis and raises
    :class:`NotAnnihilatingError` if it fails.  The kernel is stored as a
    :class:`PiecewisePolynomial` over the functional's domain
    (:attr:`pieces`); calling the kernel evaluates it there.
    """

    def __init__(self, functional: LinearFunctional, n: int, *, check: bool = True):
        if n < 0:
            raise QDomainError(f"kernel degree must be >= 0, got {n}")
        self.functional = functional
        self.n = int(n)
        if check:
            deg = annihilation_degree(functional, self.n)
            if deg < self.n:
                raise NotAnnihilatingError(
                    f"functional annihilates polynomials only up to degree {deg}, not {self.n}"
                )
        self.pieces = self._build_pieces()

    @property
    def q(self) -> float:
        return self.functional.q

    @property
    def constant(self) -> float:
        return remainder_constant(self.n, self.q)

    def terms(self) -> list:
        """The kernel as ``sum_j P_j(t) 1[a <= t < s_j]``, a list of ``(s_j, P_j)``.

        ``P_j`` are ascending coefficient arrays, already multiplied by
        :attr:`constant`.  Integrating term by term avoids the cancellation
        that builds up inside the pieces.
        """
        L, n, q, c0 = self.functional, self.n, self.q, self.constant
        out = [(x, c0 * c * pochhammer_coeffs_in_t(x, n, q)) for c, x in L.point_terms]
        for w, lo, hi in L.integral_terms:
            out.append((hi, c0 * w * _antiderivative_coeffs(hi, n, q)))
            out.append((lo, -c0 * w * _antiderivative_coeffs(lo, n, q)))
        return out

    def exact_terms(self) -> list:
        """:meth:`terms` in rational arithmetic, as ``(s_j, [Fraction, ...])`` pairs."""
        L, n = self.functional, self.n
        q = ex.fr(self.q)
        c0 = ex.remainder_constant(n, q)
        out = [(ex.fr(x), [c0 * ex.fr(c) * v for v in ex.pochhammer(ex.fr(x), n, q)]) for c, x in L.point_terms]
        for w, lo, hi in L.integral_terms:
            cw = c0 * ex.fr(w)
            out.append((ex.fr(hi), [cw * v for v in ex.antiderivative(ex.fr(hi), n, q)]))
            out.append((ex.fr(lo), [-cw * v for v in ex.antiderivative(ex.fr(lo), n, q)]))
        return out

    def _build_pieces(self) -> PiecewisePolynomial:
        bps = self.functional.breakpoints
        terms = self.terms()
        pieces = []
        for v in bps[1:]:
            acc = np.zeros(self.n + 2)
            for s, poly in terms:
                if v <= s:
                    acc = P.polyadd(acc, poly)
            pieces.append(acc)
        return PiecewisePolynomial(bps, pieces, 0.0)

    def __call__(self, t):
        return self.pieces(t)

    def __repr__(self):
        return f"PeanoKernel(n={self.n}, q={self.q}, breakpoints={self.functional.breakpoints})"


def kernel_value(K: PeanoKernel, t: float, cfg: IntegralConfig = DEFAULT_CONFIG, *, method: str = "closed"):
    """Evaluate ``K(t)`` directly from the functional, term by term.

    Point terms use :func:`truncated_q_power`.  Integral terms use the
    q-antiderivative in closed form (``method="closed"``) or sum the Jackson
    series of ``x -> (x - t)^{n,q}`` over ``[alpha, beta]`` for ``t < alpha``
    and ``[t/q, beta]`` for ``alpha <= t < beta`` (``method="series"``).
    This path is independent of :attr:`PeanoKernel.pieces`.
    """
    L, n, q = K.functional, K.n, K.q
    a, b = L.domain
    if not a <= t <= b:
        raise QDomainError(f"t={t} outside the domain [{a}, {b}]")
    total = [c * truncated_q_power(x, t, n, q) for c, x in L.point_terms]
    for w, lo, hi in L.integral_terms:
        if t >= hi:
            continue
        if method == "closed":
            anti = lambda y: q_pochhammer_power(y, t / q, n + 1, q) / q_int(n + 1, 1.0 / q)
            val = anti(hi) - anti(lo) if t < lo else anti(hi)
        elif method == "series":
            start = lo if t < lo else t / q
            val = jackson_integral_ab(lambda x: q_pochhammer_power(x, t, n, q), start, hi, 1.0 / q, cfg)
        else:
            raise QDomainError(f"unknown kernel method {method!r}")
        total.append(w * val)
    return K.constant * math.fsum(total)


def integrate_against(pieces: PiecewisePolynomial, g, q: float, cfg: IntegralConfig = DEFAULT_CONFIG):
    """``sum over pieces of int_u^v g(t) piece(t) d_{1/q} t``.

    Polynomial ``g`` gives closed-form piece integrals; otherwise each piece
    is summed as a Jackson series of ``g`` times the piece's polynomial.
    """
    bps = pieces.breakpoints
    return integrate_terms([(u, v, p.coeffs) for u, v, p in zip(bps[:-1], bps[1:], pieces.pieces)], g, q, cfg)


def integrate_terms(terms, g, q: float, cfg: IntegralConfig = DEFAULT_CONFIG):
    """``sum_j int_{u_j}^{v_j} g(t) P_j(t) d_{1/q} t`` for ``(u_j, v_j, P_j)`` triples."""
    base = 1.0 / q
    total = []
    for u, v, coeffs in terms:
        if u == v or not np.any(coeffs):
            continue
        if isinstance(g, Polynomial):
            prod = P.polymul(g.coeffs or (0.0,), coeffs)
            total.append(polynomial_jackson_integral(prod, u, v, base))
        else:
            piece = Polynomial(coeffs)
            total.append(jackson_integral_ab(lambda t, p=piece: g(t) * p(t), u, v, base, cfg))
    return math.fsum(total)


def reconstruct(K: PeanoKernel, f, cfg: IntegralConfig = DEFAULT_CONFIG, *, method: str = "piecewise") -> float:
    """``int_a^b (D_{1/q}^{n+1} f)(q^n t) K(t) d_{1/q} t``.

    ``method="piecewise"`` (default) integrates each kernel piece over its
    own interval and equals ``apply(L, f)`` for any functional.  The pieces
    are regrouped by the term of ``L`` they come from, each term being a
    polynomial on ``[a, s)``.  Below ``a`` the full terms add up to
    ``L_x[(x - t)^{n,q}] = 0``, so every term is integrated from 0 instead,
    which is where the Jackson series is anchored.  This changes nothing when
    ``L`` annihilates exactly and keeps a rounding-level annihilation defect
    from being amplified by the Taylor coefficients of ``f`` about ``a``.
    For polynomial ``f`` the computation is finite and carried out exactly.
    ``method="lattice"`` sums a single Jackson series over ``[a, b]`` with the
    kernel evaluated pointwise; it agrees with the default only when the
    functional's breakpoints lie on ``{a q^-i} U {b q^-i}``.
    """
    f = as_function(f)
    if method == "piecewise" and isinstance(f, Polynomial):
        q = ex.fr(K.q)
        g = ex.composed_derivative(f.coeffs, K.n, q)
        zero = ex.Fraction(0)
        return float(ex.integrate_terms([(zero, s, c) for s, c in K.exact_terms()], g, 1 / q))
    g = composed_derivative(f, K.n, K.q)
    if method == "piecewise":
        return integrate_terms([(0.0, s, poly) for s, poly in K.terms()], g, K.q, cfg)
    if method == "lattice":
        a, b = K.functional.domain
        return jackson_integral_ab(lambda t: g(t) * K(t), a, b, 1.0 / K.q, cfg)
    raise QDomainError(f"unknown reconstruction method {method!r}")


class MeanValueForm(NamedTuple):
    """``L(f) = g(xi) int K`` with ``g(t) = (D_{1/q}^{n+1} f)(q^n t)``.

    The derivative itself is evaluated at ``q**n * xi``.
    """

    xi: float
    value: float


def _kernel_sign_samples(K: PeanoKernel, cfg: IntegralConfig) -> np.ndarray:
    a, b = K.functional.domain
    base = 1.0 / K.q
    terms = min(int(cfg.max_terms), math.ceil(math.log(cfg.rel_tol) / math.log(base)) + 3)
    pts = [np.linspace(a, b, 4096)]
    for end in (a, b):
        if end != 0.0:
            nodes, _ = jackson_nodes(end, base, terms)
            pts.append(nodes[(nodes >= a) & (nodes <= b)])
    return np.asarray(K(np.concatenate(pts)), dtype=float)


def mean_value_form(K: PeanoKernel, f, cfg: IntegralConfig = DEFAULT_CONFIG):
    """Mean-value form of ``L(f)`` for a one-signed kernel.

    Returns a :class:`MeanValueForm` with ``value = g(xi) * q^{n(n+1)/2} /
    [n+1]_q! * L(x^{n+1})``, or ``None`` when no ``xi`` is bracketed, which
    can happen for ``q`` below the mean-value threshold.  A kernel that
    changes sign on the sampled grid raises :class:`SignChangeError`.
    """
    vals = _kernel_sign_samples(K, cfg)
    tiny = 1e-12 * max(1.0, float(np.max(np.abs(vals))))
    if np.any(vals > tiny) and np.any(vals < -tiny):
        raise SignChangeError("the kernel changes sign; the mean-value form does not apply")
    L, n, q = K.functional, K.n, K.q
    mono = Polynomial([0.0] * (n + 1) + [1.0])
    kernel_mass = q ** (n * (n + 1) / 2) / q_factorial(n + 1, q) * apply(L, mono, cfg)
    if kernel_mass == 0.0:
        return None
    g = composed_derivative(f, n, q)
    target = apply(L, f, cfg) / kernel_mass
    a, b = L.domain
    xi = solve_level(g, target, a, b)
    if xi is None:
        return None
    return MeanValueForm(xi, float(g(xi)) * kernel_mass)
