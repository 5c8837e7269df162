"""Function representations consumed by the rest of the package.

Three immutable variants are provided: :class:`Polynomial`,
:class:`PiecewisePolynomial` (quantum splines) and :class:`Builtin`, a named
black-box evaluator drawn from a registry.  All of them are callable and
broadcast over numpy arrays.  Plain Python callables are accepted wherever a
function is expected and are treated as black boxes.

The JSON form used by the command line is::

    {"type": "polynomial", "coeffs": [c0, c1, ...]}
    {"type": "piecewise", "breakpoints": [...], "pieces": [[...], ...], "outside": 0}
    {"type": "builtin", "name": "exp", "params": {"scale": 1.0}}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .exceptions import QDomainError
from .qarith import as_q, q_int

__all__ = [
    "FunctionSpec",
    "Polynomial",
    "PiecewisePolynomial",
    "Builtin",
    "BlackBox",
    "BUILTINS",
    "register_builtin",
    "as_function",
    "evaluate",
    "from_json",
    "to_json",
    "example2_spline",
]


def _scalarize(out):
    out = np.asarray(out, dtype=float)
    return float(out) if out.ndim == 0 else out


class FunctionSpec:
    """Common base of the function variants."""

    def __call__(self, x):
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Polynomial(FunctionSpec):
    """Polynomial with ascending coefficients, ``coeffs[k]`` multiplying ``x**k``."""

    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in np.ravel(self.coeffs)))

    @property
    def degree(self) -> int:
        # structural degree; the empty polynomial has degree -1
        return len(self.coeffs) - 1

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for c in reversed(self.coeffs):
            out = out * x + c
        return _scalarize(out)

    def q_derivative(self, q) -> "Polynomial":
        """Exact ``D_q`` via ``D_q x^k = [k]_q x^(k-1)``."""
        q = as_q(q)
        return Polynomial([self.coeffs[k] * q_int(k, q) for k in range(1, len(self.coeffs))])

    def derivative(self) -> "Polynomial":
        """Classical derivative."""
        return Polynomial([k * self.coeffs[k] for k in range(1, len(self.coeffs))])

    def scaled(self, s: float) -> "Polynomial":
        """The polynomial ``x -> self(s*x)``."""
        return Polynomial([c * s**k for k, c in enumerate(self.coeffs)])

    def to_json(self) -> dict:
        return {"type": "polynomial", "coeffs": list(self.coeffs)}


@dataclass(frozen=True)
class PiecewisePolynomial(FunctionSpec):
    """Piecewise polynomial on half-open intervals ``[b_i, b_{i+1})``.

    Outside ``[breakpoints[0], breakpoints[-1])`` the value is ``outside``.
    """

    breakpoints: tuple
    pieces: tuple
    outside: float = 0.0

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        pieces = tuple(p if isinstance(p, Polynomial) else Polynomial(p) for p in self.pieces)
        if len(bps) < 2 or any(b1 >= b2 for b1, b2 in zip(bps, bps[1:])):
            raise QDomainError("breakpoints must be strictly increasing with at least two entries")
        if len(pieces) != len(bps) - 1:
            raise QDomainError(f"expected {len(bps) - 1} pieces, got {len(pieces)}")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "outside", float(self.outside))

    def piece_index(self, x):
        """Index of the piece containing ``x``; -1 or ``len(pieces)`` outside."""
        return np.searchsorted(self.breakpoints, x, side="right") - 1

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        idx = self.piece_index(x)
        out = np.full(x.shape, self.outside)
        for i, piece in enumerate(self.pieces):
            mask = idx == i
            if np.any(mask):
                out[mask] = piece(x[mask])
        return _scalarize(out)

    def map_pieces(self, fn) -> "PiecewisePolynomial":
        return PiecewisePolynomial(self.breakpoints, [fn(p) for p in self.pieces], self.outside)

    def to_json(self) -> dict:
        return {
            "type": "piecewise",
            "breakpoints": list(self.breakpoints),
            "pieces": [list(p.coeffs) for p in self.pieces],
            "outside": self.outside,
        }


BUILTINS: dict[str, Callable[..., Callable]] = {}


def register_builtin(name: str):
    """Register a factory ``params -> vectorized callable`` under ``name``."""

    def deco(factory):
        BUILTINS[name] = factory
        return factory

    return deco


@register_builtin("monomial")
def _monomial(k=1, c=1.0):
    k = int(k)
    return lambda x: c * np.asarray(x, dtype=float) ** k


@register_builtin("exp")
def _exp(scale=1.0, c=1.0):
    return lambda x: c * np.exp(scale * np.asarray(x, dtype=float))


@register_builtin("sin")
def _sin(freq=1.0, c=1.0):
    return lambda x: c * np.sin(freq * np.asarray(x, dtype=float))


@register_builtin("cos")
def _cos(freq=1.0, c=1.0):
    return lambda x: c * np.cos(freq * np.asarray(x, dtype=float))


@register_builtin("abs_power")
def _abs_power(center=0.0, power=1.5, c=1.0):
    return lambda x: c * np.abs(np.asarray(x, dtype=float) - center) ** power


@register_builtin("example2_spline")
def _example2(q=2.0):
    return example2_spline(q)


@dataclass(frozen=True)
class Builtin(FunctionSpec):
    """A registered black-box evaluator referenced by name."""

    name: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in BUILTINS:
            raise QDomainError(f"unknown builtin {self.name!r}; known: {sorted(BUILTINS)}")
        object.__setattr__(self, "params", dict(self.params))

    def __call__(self, x):
        return _scalarize(BUILTINS[self.name](**self.params)(x))

    def to_json(self) -> dict:
        return {"type": "builtin", "name": self.name, "params": dict(self.params)}


@dataclass(frozen=True)
class BlackBox(FunctionSpec):
    """Wraps an arbitrary Python callable; library use only."""

    func: Callable

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        try:
            out = np.asarray(self.func(x), dtype=float)
            if out.shape != x.shape:
                raise ValueError
        except (TypeError, ValueError):
            out = np.vectorize(lambda v: float(self.func(v)), otypes=[float])(x)
        return _scalarize(out)

    def to_json(self) -> dict:
        raise TypeError("black-box callables have no JSON form")


def as_function(f) -> FunctionSpec:
    """Coerce a spec, JSON dict/string, constant or callable to a FunctionSpec."""
    if isinstance(f, FunctionSpec):
        return f
    if isinstance(f, (dict, str)):
        return from_json(f)
    if isinstance(f, (int, float)):
        return Polynomial([f])
    if callable(f):
        return BlackBox(f)
    raise TypeError(f"cannot interpret {f!r} as a function")


def evaluate(f, x):
    """Evaluate any accepted function form at ``x`` (scalar or array)."""
    return as_function(f)(x)


def from_json(obj) -> FunctionSpec:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "type" not in obj:
        raise QDomainError("function JSON must be an object with a 'type' field")
    kind = obj["type"]
    if kind == "polynomial":
        return Polynomial(obj.get("coeffs", []))
    if kind == "piecewise":
        return PiecewisePolynomial(obj["breakpoints"], obj["pieces"], obj.get("outside", 0.0))
    if kind == "builtin":
        return Builtin(obj["name"], obj.get("params", {}))
    raise QDomainError(f"unknown function type {kind!r}")


def to_json(f: FunctionSpec) -> dict:
    return f.to_json()


def example2_spline(q) -> PiecewisePolynomial:
    """The cubic q-B-spline on knots 0, 1, 2, 3, 4.

    Continuous for every ``q > 0`` but, for ``q != 1``, not classically
    differentiable at the interior knots.
    """
    q = as_q(q).q
    q3 = q_int(3, q)
    last = np.polynomial.polynomial.polyfromroots([4.0, 4.0 / q, 4.0 / q**2]) * (-(q**3) / 6.0)
    pieces = [
        [0.0, 0.0, 0.0, q**3 / 6.0],
        [4 / 6.0, -4 * q3 / 6.0, 4 * q * q3 / 6.0, -3 * q**3 / 6.0],
        [-44 / 6.0, 20 * q3 / 6.0, -8 * q * q3 / 6.0, 3 * q**3 / 6.0],
        last,
    ]
    return PiecewisePolynomial([0.0, 1.0, 2.0, 3.0, 4.0], pieces, 0.0)
