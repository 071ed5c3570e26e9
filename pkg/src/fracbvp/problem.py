"""Problem data, hypothesis checks and the existence certificate.

The certificate follows the a priori bound for the fixed-point operator: on
the ball ``||u|| <= delta`` of the weighted space,

    ||T u|| <= M = L (alpha - 1) phi_q(B_delta) J,

with ``J = int_0^inf phi_q(I^gamma a)(s) ds`` and ``B_delta`` the weighted
sup of f over the ball. ``delta >= M`` certifies a solution with
``0 <= u/(1+t^(alpha-1)) <= delta`` and the same bound for ``u'``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError, HypothesisError
from .fractional import product_weights
from .green import GreenKernel, make_kernel, multipoint_sum
from .grid import Grid, evaluate_on
from .special import conjugate_exponent, gamma, phi_q

DEFAULT_T_HORIZON = 50.0
DEFAULT_LATTICE = 64


class HypothesisWarning(UserWarning):
    """A hypothesis looks violated but the computation can continue."""


@dataclass(frozen=True)
class ProblemSpec:
    """Parameters, coefficient ``a(t)`` and nonlinearity ``f(t, u, v)``.

    ``a`` is called with an array of times and ``f`` with broadcastable
    arrays ``(t, u, v)``; both must return nonnegative finite values and be
    safe to call concurrently. ``f_weighted_bound`` optionally attests the
    map ``delta -> B_delta`` in closed form.
    """

    alpha: float
    beta: float
    gamma_ord: float
    p: float
    etas: Sequence[float]
    xis: Sequence[float]
    a: Callable
    f: Callable
    f_weighted_bound: Optional[Callable[[float], float]] = None

    def __post_init__(self):
        if not 2.0 < self.alpha <= 3.0:
            raise DomainError(f"alpha must lie in (2, 3], got {self.alpha}")
        if not self.beta > 0.0:
            raise DomainError(f"beta must be positive, got {self.beta}")
        if not 0.0 < self.gamma_ord <= 1.0:
            raise DomainError(f"gamma must lie in (0, 1], got {self.gamma_ord}")
        if not self.p > 1.0:
            raise DomainError(f"p must exceed 1, got {self.p}")
        object.__setattr__(self, "etas", tuple(float(e) for e in self.etas))
        object.__setattr__(self, "xis", tuple(float(x) for x in self.xis))
        if len(self.etas) != len(self.xis) or not self.etas:
            raise DomainError("etas and xis must be non-empty and of equal length")
        if any(e <= 0.0 for e in self.etas):
            raise DomainError(f"all eta_i must be positive, got {self.etas}")
        if not (self.xis[0] > 0.0 and all(b > a for a, b in zip(self.xis, self.xis[1:]))):
            raise DomainError(f"xi_i must be positive and strictly increasing, got {self.xis}")

    @property
    def q(self) -> float:
        return conjugate_exponent(self.p)

    @property
    def m(self) -> int:
        return len(self.etas) + 2

    def kernel(self) -> GreenKernel:
        return make_kernel(self.alpha, self.beta, self.etas, self.xis)


@dataclass(frozen=True)
class ExistenceCertificate:
    J: float
    B_delta: float
    M: float
    delta: float
    satisfied: bool
    tail_flag: bool
    L: float
    h1_sum: float
    B_delta_attested: bool
    J_pinned: bool = False

    @property
    def reliable(self) -> bool:
        """False when J looked divergent or B_delta is only a sampled lower estimate."""
        return not self.tail_flag and self.B_delta_attested

    @property
    def ratio(self) -> float:
        return self.delta / self.M if self.M > 0 else float("inf")


def check_H1(spec: ProblemSpec):
    """Return ``(sum eta_i xi_i^(alpha+beta-2), 0 < sum < Gamma(alpha+beta-1))``."""
    total = multipoint_sum(spec.alpha, spec.beta, spec.etas, spec.xis)
    return total, bool(0.0 < total < gamma(spec.alpha + spec.beta - 1.0))


def sample_coefficient(spec: ProblemSpec, grid: Grid) -> np.ndarray:
    a = evaluate_on(spec.a, grid.nodes)
    if not np.all(np.isfinite(a)):
        raise DomainError("a(t) must be finite on the grid")
    if np.any(a < 0.0):
        k = int(np.argmax(a < 0.0))
        raise DomainError(f"a(t) must be nonnegative; a({grid.nodes[k]:.6g}) = {a[k]:.6g}")
    return a


def check_H3(spec: ProblemSpec, grid: Grid):
    """Integral ``J`` of ``phi_q(I^gamma a)`` over the grid, and a tail flag.

    The tail flag is raised when ``g(S_max) * S_max > 0.1 J`` for the
    integrand g, i.e. when the integrand has not decayed by the end of the
    grid and J is probably divergent on the half line. A coefficient that
    vanishes on the whole grid returns ``(0, False)`` with a warning.
    """
    a = sample_coefficient(spec, grid)
    if not np.any(a > 0.0):
        warnings.warn("a is identically zero on the grid, which violates H3",
                      HypothesisWarning, stacklevel=2)
        return 0.0, False
    g = phi_q(product_weights(grid.nodes, spec.gamma_ord) @ a, spec.p)
    J = float(grid.trapezoid_weights @ g)
    tail_flag = bool(g[-1] * grid.S_max > 0.1 * J)
    return J, tail_flag


def estimate_B_delta(spec: ProblemSpec, delta: float, t_horizon: float = DEFAULT_T_HORIZON,
                     samples: int = DEFAULT_LATTICE) -> float:
    """Weighted sup of f over ``[0, t_horizon] x [0, delta]^2``.

    Returns the attested value when the spec carries one. Otherwise f is
    maximised over a ``samples^3`` lattice of ``(t, u, v)`` and evaluated at
    ``(t, (1+t^(alpha-1)) u, (1+t^(alpha-1)) v)``; the result is a lower
    estimate of the true supremum.
    """
    if not delta > 0.0:
        raise DomainError(f"delta must be positive, got {delta}")
    if spec.f_weighted_bound is not None:
        return float(spec.f_weighted_bound(delta))
    if int(samples) != samples or samples < 2:
        raise DomainError(f"lattice needs at least 2 points per axis, got {samples}")
    t = np.linspace(0.0, t_horizon, int(samples))
    uv = np.linspace(0.0, delta, int(samples))
    T, U, V = np.meshgrid(t, uv, uv, indexing="ij", sparse=True)
    w = 1.0 + T ** (spec.alpha - 1.0)
    vals = np.broadcast_to(spec.f(T, w * U, w * V), (t.size, uv.size, uv.size))
    return float(np.max(vals))


def compute_M(kernel: GreenKernel, spec: ProblemSpec, B_delta: float, J: float) -> float:
    """``M = L (alpha - 1) phi_q(B_delta) J``."""
    if B_delta < 0.0 or J < 0.0:
        raise DomainError("B_delta and J must be nonnegative")
    return kernel.L * (kernel.alpha - 1.0) * phi_q(B_delta, spec.p) * J


def existence_certificate(spec: ProblemSpec, delta: float, grid: Grid, *, J: Optional[float] = None,
                          t_horizon: float = DEFAULT_T_HORIZON,
                          samples: int = DEFAULT_LATTICE) -> ExistenceCertificate:
    """Assemble J, B_delta and M and decide ``delta >= M``.

    Pass ``J`` to pin the integral to a known value instead of computing it
    on the grid.

    Raises
    ------
    HypothesisError
        If H1 fails.
    """
    h1_sum, ok = check_H1(spec)
    if not ok:
        raise HypothesisError(
            f"H1 violated: sum eta_i xi_i^(alpha+beta-2) = {h1_sum:.12g} must lie in "
            f"(0, Gamma(alpha+beta-1)) = (0, {gamma(spec.alpha + spec.beta - 1.0):.12g})",
            value=h1_sum,
        )
    if not delta > 0.0:
        raise DomainError(f"delta must be positive, got {delta}")
    kernel = spec.kernel()
    if J is None:
        J_val, tail_flag = check_H3(spec, grid)
    else:
        J_val, tail_flag = float(J), False
    B = estimate_B_delta(spec, delta, t_horizon, samples)
    M = compute_M(kernel, spec, B, J_val)
    return ExistenceCertificate(
        J=J_val, B_delta=B, M=M, delta=float(delta), satisfied=bool(delta >= M),
        tail_flag=tail_flag, L=kernel.L, h1_sum=h1_sum,
        B_delta_attested=spec.f_weighted_bound is not None, J_pinned=J is not None,
    )
