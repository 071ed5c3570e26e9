"""Named built-in coefficient functions and nonlinearities.

Every family is a small callable object carrying its parameters, so that
configurations can be serialised back to the descriptor they came from
(``to_descriptor``) and the affine structure of ``f`` stays visible to the
direct linear solver.

Coefficients ``a(t)`` and the affine coefficient functions are called with a
numpy array of times. Nonlinearities are called as ``f(t, u, v)`` with
broadcastable arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class Constant:
    value: float = 1.0

    def __call__(self, t):
        return np.full(np.shape(t), float(self.value))


@dataclass(frozen=True)
class Exponential:
    """``scale * exp(-rate * t)``."""

    scale: float = 1.0
    rate: float = 1.0

    def __call__(self, t):
        return self.scale * np.exp(-self.rate * np.asarray(t, dtype=float))


@dataclass(frozen=True)
class Indicator:
    """``value`` on ``[0, upper]`` and zero afterwards."""

    upper: float = 1.0
    value: float = 1.0

    def __call__(self, t):
        # the mean of the one-sided limits at the jump keeps product
        # quadrature second order when the jump sits on a grid node
        t = np.asarray(t, dtype=float)
        v = float(self.value)
        return np.where(t < self.upper, v, np.where(t == self.upper, 0.5 * v, 0.0))


@dataclass(frozen=True)
class Weighted:
    """``value / (1 + t^exponent)``."""

    value: float = 1.0
    exponent: float = 1.5

    def __call__(self, t):
        return self.value / (1.0 + np.asarray(t, dtype=float) ** self.exponent)


COEFFICIENTS = {
    "zero": lambda: Constant(0.0),
    "constant": Constant,
    "exponential": Exponential,
    "indicator": Indicator,
    "weighted": Weighted,
}


def coefficient_from_descriptor(desc):
    kind, params = _split(desc)
    if kind not in COEFFICIENTS:
        raise DomainError(f"unknown coefficient kind {kind!r}; known: {sorted(COEFFICIENTS)}")
    try:
        return COEFFICIENTS[kind](**params)
    except TypeError as exc:
        raise DomainError(f"bad parameters for {kind!r}: {exc}") from None


@dataclass(frozen=True)
class AffineNonlinearity:
    """``f(t, u, v) = c0(t) + c1(t) u + c2(t) v``."""

    c0: object
    c1: object
    c2: object

    def __call__(self, t, u, v):
        return self.c0(t) + self.c1(t) * u + self.c2(t) * v


def example41_f(weight_exponent=1.5):
    """``(2u/(1+t^e) + v/(1+t^e) + 1) / 9`` with ``e = 3/2`` in the worked example."""
    return AffineNonlinearity(
        Constant(1.0 / 9.0),
        Weighted(2.0 / 9.0, weight_exponent),
        Weighted(1.0 / 9.0, weight_exponent),
    )


def nonlinearity_from_descriptor(desc):
    kind, params = _split(desc)
    if kind == "zero":
        return AffineNonlinearity(Constant(0.0), Constant(0.0), Constant(0.0))
    if kind == "constant":
        return AffineNonlinearity(Constant(float(params.get("value", 1.0))),
                                  Constant(0.0), Constant(0.0))
    if kind == "example41":
        return example41_f(float(params.get("weight_exponent", 1.5)))
    if kind == "affine":
        unknown = set(params) - {"c0", "c1", "c2"}
        if unknown:
            raise DomainError(f"unknown affine keys {sorted(unknown)}")
        zero = {"kind": "constant", "value": 0.0}
        return AffineNonlinearity(*(coefficient_from_descriptor(params.get(c, zero))
                                    for c in ("c0", "c1", "c2")))
    raise DomainError(
        f"unknown nonlinearity kind {kind!r}; known: affine, constant, example41, zero"
    )


@dataclass(frozen=True)
class LinearBound:
    """User-attested weighted bound ``B_delta = slope * delta + intercept``."""

    slope: float
    intercept: float

    def __call__(self, delta):
        return self.slope * delta + self.intercept


def _split(desc):
    if not isinstance(desc, dict) or "kind" not in desc:
        raise DomainError(f"function descriptor must be an object with a 'kind', got {desc!r}")
    params = {k: v for k, v in desc.items() if k != "kind"}
    return desc["kind"], params
