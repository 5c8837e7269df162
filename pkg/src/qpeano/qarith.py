"""Scalar q-arithmetic: q-integers, q-factorials and q-Pochhammer powers.

Every routine here is a pure function of its arguments.  ``q`` may be given
as a plain float or as a :class:`QParam`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import QDomainError

__all__ = [
    "QParam",
    "as_q",
    "q_int",
    "q_factorial",
    "q_pochhammer_power",
    "truncated_q_power",
    "pochhammer_coeffs_in_t",
]


@dataclass(frozen=True)
class QParam:
    """The base ``q`` of the calculus.

    Two orientations occur.  Jackson series are summed in a base in (0, 1);
    the ``d_{1/q}`` operations used for Taylor expansions, kernels and
    quadrature take ``q > 1`` and sum in base ``1/q``.
    """

    q: float

    def __post_init__(self):
        q = float(self.q)
        if not math.isfinite(q) or q <= 0.0:
            raise QDomainError(f"q must be a positive finite real, got {self.q!r}")
        object.__setattr__(self, "q", q)

    @property
    def reciprocal(self) -> "QParam":
        return QParam(1.0 / self.q)

    def require_series_base(self) -> float:
        """Return q, checking it is a valid Jackson series base (0 < q < 1)."""
        if not 0.0 < self.q < 1.0:
            raise QDomainError(f"Jackson series base must lie in (0, 1), got q={self.q}")
        return self.q

    def require_reciprocal(self) -> float:
        """Return q, checking it is valid for d_{1/q} operations (q > 1)."""
        if not self.q > 1.0:
            raise QDomainError(f"d_(1/q) operations need q > 1, got q={self.q}")
        return self.q

    def __float__(self):
        return self.q


def as_q(q) -> QParam:
    return q if isinstance(q, QParam) else QParam(q)


def q_int(n: int, q) -> float:
    """q-integer ``[n]_q = 1 + q + ... + q^(n-1)``.

    Summed directly rather than via ``(1 - q^n)/(1 - q)`` so the value is
    continuous through ``q = 1`` where it equals ``n``.

    >>> q_int(3, 2)
    7.0
    """
    if n < 0:
        raise QDomainError(f"q-integers need n >= 0, got {n}")
    q = as_q(q).q
    return math.fsum(q**k for k in range(n))


def q_factorial(n: int, q) -> float:
    """``[n]_q! = [1]_q [2]_q ... [n]_q`` with ``[0]_q! = 1``."""
    if n < 0:
        raise QDomainError(f"q-factorial needs n >= 0, got {n}")
    out = 1.0
    for k in range(1, n + 1):
        out *= q_int(k, q)
    return out


def q_pochhammer_power(x, t, n: int, q):
    """``(x - t)^{n,q} = (x - t)(x - q t) ... (x - q^(n-1) t)``; 1 for ``n = 0``.

    Broadcasts over array ``x`` and ``t``.
    """
    if n < 0:
        raise QDomainError(f"Pochhammer power needs n >= 0, got {n}")
    q = as_q(q).q
    out = np.ones(np.broadcast(np.asarray(x), np.asarray(t)).shape)
    for j in range(n):
        out = out * (x - q**j * t)
    return out if out.ndim else float(out)


def truncated_q_power(x, t, n: int, q):
    """Truncated power ``(x - t)_+^{n,q}``.

    Only the factor ``(x - t)`` is clamped, so for ``q > 1`` the value can be
    negative when some ``q^j t`` exceeds ``x > t``.  For ``n = 0`` the value
    is 1 where ``x > t`` and 0 where ``x <= t``.
    """
    full = q_pochhammer_power(x, t, n, q)
    out = np.where(np.asarray(x) > np.asarray(t), full, 0.0)
    return out if out.ndim else float(out)


def pochhammer_coeffs_in_t(x: float, n: int, q) -> np.ndarray:
    """Ascending coefficients, as a polynomial in ``t``, of ``(x - t)^{n,q}``."""
    q = as_q(q).q
    c = np.array([1.0])
    for j in range(n):
        c = np.polynomial.polynomial.polymul(c, [x, -(q**j)])
    return c
