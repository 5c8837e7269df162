"""Quadrature on ``[0, b]`` against ``d_{1/q}``: the q-trapezoid rule, kernels and bounds.

A rule ``sum gamma_k f(t_k)`` that is exact on polynomials of degree ``m``
has remainder

    R(f) = int_0^b f d_{1/q} - sum gamma_k f(t_k)
         = int_0^b (D_{1/q}^{m+1} f)(q^m t) K(t) d_{1/q} t,

where ``K`` is a polynomial of degree ``m + 1`` minus a quantum spline with
knots at the nodes.

Bounds and the L2 objective use the Jackson series over ``[0, b]`` literally,
that is the sample points ``b q^-i``.  The Hölder bounds are rigorous when the
nodes lie in ``{0} U {b q^-i}``; elsewhere the pointwise kernel and the
remainder are sampled on different sets and the bound is only a heuristic.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import null_space

from .exceptions import DegenerateWeightsWarning, QDomainError
from .funcrep import as_function
from .interp import as_knots
from .peano import LinearFunctional, PeanoKernel, apply, mean_value_form
from .qarith import as_q, q_factorial, q_int, q_pochhammer_power, truncated_q_power
from .qcalc import (
    DEFAULT_CONFIG,
    IntegralConfig,
    jackson_integral_ab,
    jackson_nodes,
    q_norm,
)
from .qcalc import _series_length
from .qtaylor import composed_derivative, remainder_constant

__all__ = [
    "QuadratureRule",
    "TrapezoidError",
    "q_trapezoid",
    "trapezoid_weights",
    "trapezoid_constant",
    "trapezoid_functional",
    "trapezoid_error",
    "quad_kernel",
    "remainder_bound",
    "kernel_l2_objective",
    "optimize_weights_l2",
]


@dataclass(frozen=True)
class QuadratureRule:
    """Rule ``sum gamma_k f(t_k)`` for ``int_0^b f d_{1/q}``, exact on degree ``m``.

    Exactness is checked on construction with the same relative test as
    :func:`qpeano.peano.annihilation_degree`.
    """

    nodes: tuple
    weights: tuple
    b: float
    q: float
    m: int

    def __post_init__(self):
        nodes = as_knots(self.nodes)
        weights = tuple(float(w) for w in np.ravel(self.weights))
        if len(weights) != len(nodes):
            raise QDomainError(f"{len(nodes)} nodes but {len(weights)} weights")
        b = float(self.b)
        if not b > 0:
            raise QDomainError(f"b must be positive, got {b}")
        if nodes[0] < 0 or nodes[-1] > b:
            raise QDomainError(f"nodes must lie in [0, {b}]")
        if int(self.m) < 0:
            raise QDomainError(f"design degree must be >= 0, got {self.m}")
        object.__setattr__(self, "nodes", tuple(nodes))
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "q", as_q(self.q).require_reciprocal())
        object.__setattr__(self, "m", int(self.m))
        PeanoKernel(self.functional(), self.m, check=True)

    def functional(self) -> LinearFunctional:
        """The remainder ``f -> int_0^b f - sum gamma_k f(t_k)``."""
        pts = [(-w, t) for w, t in zip(self.weights, self.nodes)]
        return LinearFunctional(pts, [(1.0, 0.0, self.b)], (0.0, self.b), self.q)

    def __call__(self, f) -> float:
        f = as_function(f)
        return math.fsum(w * float(f(t)) for w, t in zip(self.weights, self.nodes))

    def remainder(self, f, cfg: IntegralConfig = DEFAULT_CONFIG) -> float:
        return apply(self.functional(), f, cfg)

    def to_json(self) -> dict:
        return {"nodes": list(self.nodes), "weights": list(self.weights), "b": self.b, "q": self.q, "m": self.m}

    @classmethod
    def from_json(cls, obj) -> "QuadratureRule":
        try:
            return cls(obj["nodes"], obj["weights"], obj["b"], obj["q"], obj.get("m", 0))
        except (KeyError, TypeError) as exc:
            raise QDomainError(f"malformed quadrature rule: {exc}") from exc


# -- q-trapezoid ---------------------------------------------------------------


def trapezoid_weights(a: float, b: float, q) -> tuple:
    q = as_q(q).q
    two = q_int(2, q)
    return (b - a * q) / two, (b * q - a) / two


def q_trapezoid(f, a: float, b: float, q) -> float:
    """``(b - aq)/[2]_q f(a) + (bq - a)/[2]_q f(b)``."""
    if not a < b:
        raise QDomainError(f"need a < b, got [{a}, {b}]")
    as_q(q).require_reciprocal()
    f = as_function(f)
    wa, wb = trapezoid_weights(a, b, q)
    return wa * float(f(a)) + wb * float(f(b))


def trapezoid_constant(a: float, b: float, q) -> float:
    """``-q (b - a)(bq - a)(b - aq) / ([3]_q! [2]_q!)``; tends to ``-(b - a)^3 / 12``."""
    q = as_q(q).q
    return -q * (b - a) * (b * q - a) * (b - a * q) / (q_factorial(3, q) * q_factorial(2, q))


def trapezoid_functional(a: float, b: float, q) -> LinearFunctional:
    wa, wb = trapezoid_weights(a, b, q)
    return LinearFunctional([(-wa, a), (-wb, b)], [(1.0, a, b)], (a, b), as_q(q).q)


class TrapezoidError(NamedTuple):
    """Exact error and its mean-value form ``constant * (D_{1/q}^2 f)(q xi)``.

    ``mean_value_bound`` and ``xi`` are ``None`` when no ``xi`` is found.
    """

    actual: float
    mean_value_bound: float | None
    xi: float | None


def trapezoid_error(f, a: float, b: float, q, cfg: IntegralConfig = DEFAULT_CONFIG) -> TrapezoidError:
    q = as_q(q).require_reciprocal()
    f = as_function(f)
    actual = jackson_integral_ab(f, a, b, 1.0 / q, cfg) - q_trapezoid(f, a, b, q)
    K = PeanoKernel(trapezoid_functional(a, b, q), 1, check=False)
    mv = mean_value_form(K, f, cfg)
    if mv is None:
        return TrapezoidError(actual, None, None)
    g = composed_derivative(f, 1, q)
    return TrapezoidError(actual, trapezoid_constant(a, b, q) * float(g(mv.xi)), mv.xi)


# -- general rules -------------------------------------------------------------

_EPS = np.finfo(float).eps


def _polynomial_part(t, m: int, b: float, q: float):
    return q ** (m * (m + 3) / 2) * q_pochhammer_power(b, np.asarray(t, dtype=float) / q, m + 1, q) / q_factorial(m + 1, q)


def _spline_part(t, nodes, weights, m: int, q: float, closed: bool = False):
    t = np.asarray(t, dtype=float)
    if closed:
        # (t_k - t)^{m,q} on t <= t_k; differs from the truncated power only at t = t_k, m = 0
        s = sum(w * q_pochhammer_power(tk, t, m, q) * (t <= tk) for w, tk in zip(weights, nodes))
    else:
        s = sum(w * truncated_q_power(tk, t, m, q) for w, tk in zip(weights, nodes))
    return remainder_constant(m, q) * np.asarray(s, dtype=float)


def _kernel(t, nodes, weights, m, b, q, closed=False):
    out = _polynomial_part(t, m, b, q) - _spline_part(t, nodes, weights, m, q, closed)
    out = np.asarray(out, dtype=float)
    return float(out) if out.ndim == 0 else out


def quad_kernel(rule: QuadratureRule, t):
    """``K(t) = q^{m(m+3)/2} (b - t/q)^{m+1,q} / [m+1]_q! - s(t)``.

    ``s(t) = q^{m(m+1)/2} / [m]_q! sum_k gamma_k (t_k - t)_+^{m,q}``.
    """
    t = np.asarray(t, dtype=float)
    if np.any((t < 0) | (t > rule.b)):
        raise QDomainError(f"t outside [0, {rule.b}]")
    return _kernel(t, rule.nodes, rule.weights, rule.m, rule.b, rule.q)


def remainder_bound(rule: QuadratureRule, f, p1: float = math.inf, cfg: IntegralConfig = DEFAULT_CONFIG) -> float:
    """q-Hölder bound on ``|R(f)|``.

    ``p1 = inf`` gives ``||g||_inf int_0^b |K|`` and ``p1 = 2`` gives
    ``||g||_2 ||K||_2``, where ``g(t) = (D_{1/q}^{m+1} f)(q^m t)`` is the
    integrand that multiplies the kernel.

    The kernel is sampled with ``(t_k - t)^{m,q}`` counted at ``t = t_k``.
    On the Jackson lattice this is the kernel that reproduces ``R(f)``
    exactly.  It differs from :func:`quad_kernel` only for ``m = 0``, where
    the truncated power drops the node's own sample.
    """
    q, b, m = rule.q, rule.b, rule.m
    g = composed_derivative(f, m, q)
    if p1 not in (2, math.inf):
        raise QDomainError(f"p1 must be 2 or inf, got {p1}")
    # the kernel has flat stretches between nodes that would fool the
    # adaptive stopping rule, so it is summed over a fixed-length lattice
    pts, w = _snap(*jackson_nodes(b, 1.0 / q, _series_length(1.0 / q, cfg)), rule.nodes)
    K = np.abs(_kernel(pts, rule.nodes, rule.weights, m, b, q, closed=True))
    if math.isinf(p1):
        return q_norm(g, b, math.inf, q, cfg) * math.fsum(w * K)
    return q_norm(g, b, 2, q, cfg) * math.sqrt(math.fsum(w * K**2))


def _snap(pts, w, nodes):
    """Move lattice points lying within a few ulps of a node onto the node.

    Nodes written as ``b q^-k`` and lattice points ``b (1/q)^k`` round
    differently; without this a truncated power of degree 0 would flip on
    the last bit.
    """
    pts = pts.copy()
    for tk in nodes:
        pts[np.abs(pts - tk) <= 8 * _EPS * abs(tk)] = tk
    return pts, w


def _lattice(b: float, q: float, cfg: IntegralConfig, nodes):
    base = 1.0 / q
    n = math.ceil(math.log(cfg.rel_tol) / math.log(base)) + 3
    if n > cfg.max_terms:
        raise QDomainError(
            f"q = {q} needs {n} Jackson terms for the L2 objective; raise max_terms or rel_tol"
        )
    return _snap(*jackson_nodes(b, base, n), nodes)


def kernel_l2_objective(nodes, weights, m: int, b: float, q, cfg: IntegralConfig = DEFAULT_CONFIG) -> float:
    """``int_0^b K(t)^2 d_{1/q} t`` for arbitrary weights (no exactness check)."""
    q = as_q(q).require_reciprocal()
    nodes = as_knots(nodes)
    pts, w = _lattice(b, q, cfg, nodes)
    vals = _kernel(pts, nodes, np.ravel(weights), m, b, q)
    return math.fsum(w * vals**2)


def optimize_weights_l2(nodes, m: int, b: float, q, cfg: IntegralConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Weights minimizing ``int_0^b K^2 d_{1/q}`` among rules exact on degree ``m``.

    ``K`` is affine in the weights, so this is least squares in the Jackson
    inner product with the linear exactness conditions as constraints.  The
    constraints are solved first and the objective is minimized over their
    null space.  With ``m + 1`` nodes the exact rule is unique and the
    objective is never assembled, which keeps ``q`` close to 1 cheap.

    The objective only sees the kernel on the lattice ``b q^-i``.  Nodes that
    no lattice point separates (two nodes between consecutive lattice points
    when ``m = 0``, say) can leave some exact weight combinations invisible
    to it.  The minimizer is then not unique; a
    :class:`DegenerateWeightsWarning` is issued and the minimum-norm solution
    returned.
    """
    q = as_q(q).require_reciprocal()
    nodes = np.asarray(as_knots(nodes), dtype=float)
    if m < 0:
        raise QDomainError(f"m must be >= 0, got {m}")
    if len(nodes) < m + 1:
        raise QDomainError(f"{len(nodes)} nodes cannot integrate degree {m} exactly")
    if nodes[0] < 0 or nodes[-1] > b:
        raise QDomainError(f"nodes must lie in [0, {b}]")
    scale = max(b, 1.0)
    A = np.vander(nodes / scale, m + 1, increasing=True).T
    r = np.array([b ** (j + 1) / q_int(j + 1, 1.0 / q) / scale**j for j in range(m + 1)])
    gamma0, _, rank, sv = np.linalg.lstsq(A, r, rcond=None)
    if rank < m + 1:
        raise QDomainError("exactness conditions are singular for these nodes")
    N = null_space(A)
    if N.shape[1] == 0:
        return gamma0
    pts, w = _lattice(b, q, cfg, nodes)
    phi = np.stack([remainder_constant(m, q) * truncated_q_power(tk, pts, m, q) for tk in nodes])
    poly = _polynomial_part(pts, m, b, q)
    G = (phi * w) @ phi.T
    h = (phi * w) @ poly
    H = N.T @ G @ N
    # H is symmetric positive semidefinite; eigenvalues at rounding level
    # relative to G are degenerate directions, not information
    lam, V = np.linalg.eigh(H)
    keep = lam > 1e-12 * max(float(np.max(np.abs(np.diag(G)))), np.finfo(float).tiny)
    rhs = V.T @ (N.T @ (h - G @ gamma0))
    z = V[:, keep] @ (rhs[keep] / lam[keep])
    if not np.all(keep):
        warnings.warn(
            "the L2 normal matrix is singular for these nodes; returning the minimum-norm minimizer",
            DegenerateWeightsWarning,
            stacklevel=2,
        )
    return gamma0 + N @ z
