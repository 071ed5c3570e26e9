"""Truncated, graded discretisation of the half line and functions sampled on it."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

MIN_INTERVALS = 16


def _frozen(values):
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Grid:
    """Nodes ``0 = t_0 < t_1 < ... < t_N = S_max`` on the truncated half line.

    Build graded grids with :meth:`graded`; ``t_k = S_max (k/N)^grading``.
    """

    nodes: np.ndarray
    grading: float = 1.0

    def __post_init__(self):
        nodes = _frozen(self.nodes)
        if nodes.ndim != 1 or nodes.size < MIN_INTERVALS + 1:
            raise DomainError(f"a grid needs at least {MIN_INTERVALS} intervals")
        if nodes[0] != 0.0:
            raise DomainError("the first grid node must be exactly 0")
        if not np.all(np.isfinite(nodes)) or np.any(np.diff(nodes) <= 0.0):
            raise DomainError("grid nodes must be finite and strictly increasing")
        if not self.grading >= 1.0:
            raise DomainError(f"grading exponent must be >= 1, got {self.grading}")
        object.__setattr__(self, "nodes", nodes)

    @classmethod
    def graded(cls, S_max: float, N: int, grading: float = 2.0) -> Grid:
        if not (np.isfinite(S_max) and S_max > 0):
            raise DomainError(f"S_max must be positive, got {S_max}")
        if int(N) != N or N < MIN_INTERVALS:
            raise DomainError(f"N must be an integer >= {MIN_INTERVALS}, got {N}")
        if not grading >= 1.0:
            raise DomainError(f"grading exponent must be >= 1, got {grading}")
        k = np.arange(int(N) + 1) / N
        nodes = S_max * k**grading
        nodes[-1] = S_max
        return cls(nodes, float(grading))

    @property
    def N(self) -> int:
        return self.nodes.size - 1

    @property
    def S_max(self) -> float:
        return float(self.nodes[-1])

    @property
    def steps(self) -> np.ndarray:
        return np.diff(self.nodes)

    @property
    def trapezoid_weights(self) -> np.ndarray:
        h = self.steps
        w = np.zeros_like(self.nodes)
        w[:-1] += 0.5 * h
        w[1:] += 0.5 * h
        return w

    def sample(self, func) -> SampledFunction:
        """Evaluate a vectorised callable at the nodes."""
        return SampledFunction(self, evaluate_on(func, self.nodes))

    def weight(self, alpha: float) -> np.ndarray:
        """The weight ``1 + t^(alpha-1)`` of the space E at the nodes."""
        return 1.0 + self.nodes ** (alpha - 1.0)


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Values of a function at every node of a grid."""

    grid: Grid
    values: np.ndarray = field()

    def __post_init__(self):
        values = _frozen(self.values)
        if values.shape != self.grid.nodes.shape:
            raise DomainError(
                f"expected {self.grid.nodes.size} samples, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise DomainError("sampled values must be finite")
        object.__setattr__(self, "values", values)

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes

    def __mul__(self, other):
        if isinstance(other, SampledFunction):
            return SampledFunction(self.grid, self.values * other.values)
        return SampledFunction(self.grid, self.values * other)

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, SampledFunction):
            return SampledFunction(self.grid, self.values + other.values)
        return SampledFunction(self.grid, self.values + other)

    def __sub__(self, other):
        if isinstance(other, SampledFunction):
            return SampledFunction(self.grid, self.values - other.values)
        return SampledFunction(self.grid, self.values - other)

    def __call__(self, t):
        """Piecewise-linear interpolation between nodes."""
        return np.interp(t, self.grid.nodes, self.values)


def evaluate_on(func, t):
    """Evaluate ``func`` at an array of points, vectorised when possible."""
    t = np.asarray(t, dtype=float)
    try:
        out = np.asarray(func(t), dtype=float)
    except (TypeError, ValueError):
        out = None
    if out is None or out.shape != t.shape:
        if out is not None and out.ndim == 0:
            return np.full(t.shape, float(out))
        out = np.array([float(func(x)) for x in t.ravel()]).reshape(t.shape)
    return out
