"""Green's function of the linear multi-point problem on the half line.

For ``D^alpha u + h = 0``, ``u(0) = u'(0) = 0`` and
``lim D^(alpha-1) u(t) = sum_i eta_i I^beta u'(xi_i)`` the solution is
``u(t) = int_0^inf G(t, s) h(s) ds`` with

    G(t, s) = [Gamma(alpha+beta-1) - sum_{xi_i > s} eta_i (xi_i - s)^kappa] t^(alpha-1) / (Gamma(alpha) Delta)
              - 1{s <= t} (t - s)^(alpha-1) / Gamma(alpha),

``kappa = alpha + beta - 2`` and ``Delta = Gamma(alpha+beta-1) - sum_i eta_i xi_i^kappa``.
The per-point indicator in the sum reproduces every branch of the
four-case form and stays unambiguous when the xi_i straddle s.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, DomainError, HypothesisError
from .fractional import product_weights
from .grid import SampledFunction
from .special import gamma


@dataclass(frozen=True)
class GreenKernel:
    alpha: float
    beta: float
    etas: tuple
    xis: tuple
    delta: float
    L: float
    gamma_ab: float
    gamma_a: float

    @property
    def kappa(self) -> float:
        """Exponent ``alpha + beta - 2`` of the multi-point terms."""
        return self.alpha + self.beta - 2.0

    @property
    def multipoint_sum(self) -> float:
        return self.gamma_ab - self.delta

    @property
    def gamma_a1(self) -> float:
        return self.gamma_a / (self.alpha - 1.0)

    def _excess(self, s):
        # sum_i eta_i [xi_i^kappa - (xi_i - s)_+^kappa] >= 0
        s = np.asarray(s, dtype=float)
        acc = np.zeros(s.shape)
        for eta, xi in zip(self.etas, self.xis):
            rest = np.clip(xi - s, 0.0, None) ** self.kappa
            acc = acc + eta * np.maximum(xi**self.kappa - rest, 0.0)
        return acc


def multipoint_sum(alpha, beta, etas, xis) -> float:
    """``sum_i eta_i xi_i^(alpha+beta-2)``."""
    kappa = alpha + beta - 2.0
    return float(sum(eta * xi**kappa for eta, xi in zip(etas, xis)))


def make_kernel(alpha, beta, etas, xis) -> GreenKernel:
    """Validate the parameters and precompute Delta and the bound constant L.

    Raises
    ------
    DomainError
        For parameters outside ``2 < alpha <= 3``, ``beta > 0``, ``eta_i > 0``
        or non-increasing ``0 < xi_1 < ...``.
    HypothesisError
        If ``Delta <= 0``; ``err.value`` is the offending sum.
    """
    if not 2.0 < alpha <= 3.0:
        raise DomainError(f"alpha must lie in (2, 3], got {alpha}")
    if not beta > 0.0:
        raise DomainError(f"beta must be positive, got {beta}")
    etas = tuple(float(e) for e in etas)
    xis = tuple(float(x) for x in xis)
    if len(etas) != len(xis) or not etas:
        raise DomainError("etas and xis must be non-empty and of equal length")
    if any(not (e > 0.0 and np.isfinite(e)) for e in etas):
        raise DomainError(f"all eta_i must be positive, got {etas}")
    if not (xis[0] > 0.0 and all(b > a for a, b in zip(xis, xis[1:]))):
        raise DomainError(f"xi_i must be positive and strictly increasing, got {xis}")
    if not np.all(np.isfinite(xis)):
        raise DomainError("xi_i must be finite")

    total = multipoint_sum(alpha, beta, etas, xis)
    gamma_ab = gamma(alpha + beta - 1.0)
    gamma_a = gamma(alpha)
    delta = gamma_ab - total
    if delta <= 0.0:
        raise HypothesisError(
            f"H1 violated: sum eta_i xi_i^(alpha+beta-2) = {total:.12g} "
            f">= Gamma(alpha+beta-1) = {gamma_ab:.12g}",
            value=total,
        )
    L = gamma_ab / (gamma_a * delta)
    return GreenKernel(float(alpha), float(beta), etas, xis, delta, L, gamma_ab, gamma_a)


def eval_G(k: GreenKernel, t, s):
    """G(t, s); broadcasts over array arguments.

    Evaluated in the rearranged form

        [t^(alpha-1) - 1{s<=t} (t-s)^(alpha-1)] / Gamma(alpha)
        + t^(alpha-1) P(s) / (Gamma(alpha) Delta),
        P(s) = sum_i eta_i [xi_i^kappa - (xi_i - s)_+^kappa],

    in which both terms are nonnegative, so no rounding can push G below 0.
    """
    t, s = _check_ts(t, s)
    return _scalar(_kernel_terms(k, t, s, k.alpha - 1.0) / k.gamma_a)


def eval_Gt(k: GreenKernel, t, s):
    """Partial derivative of G(t, s) in t; 0 at t = 0 by continuity."""
    t, s = _check_ts(t, s)
    return _scalar(_kernel_terms(k, t, s, k.alpha - 2.0) / k.gamma_a1)


def _kernel_terms(k, t, s, expo):
    tp = t**expo
    lag = np.where(s <= t, np.clip(t - s, 0.0, None) ** expo, 0.0)
    # t^e >= (t - s)^e; the clamp absorbs ulp differences between pow paths
    return np.maximum(tp - lag, 0.0) + tp * k._excess(s) / k.delta


def _check_ts(t, s):
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if not (np.all(np.isfinite(t)) and np.all(np.isfinite(s))):
        raise DomainError("G(t, s) needs finite arguments")
    if np.any(t < 0.0) or np.any(s < 0.0):
        raise DomainError("G(t, s) is defined for t, s >= 0")
    return t, s


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def kernel_matrices(k: GreenKernel, grid):
    """Quadrature matrices ``(KG, KGt)`` for ``int_0^S_max G(t_k, s) h(s) ds``.

    Both integrals are evaluated exactly for the piecewise-linear interpolant
    of ``h``: every term of G is a power of ``(c - s)_+``, so each reduces to
    a product-trapezoidal fractional integral of h at ``c = t_k`` or ``xi_i``.
    """
    t = grid.nodes
    if k.xis[-1] > grid.S_max:
        raise DomainError(
            f"grid ends at {grid.S_max} before the last multi-point node {k.xis[-1]}"
        )
    kp1 = k.kappa + 1.0
    # row vector r with r @ h = Gamma_ab int h - sum_i eta_i int_0^xi_i (xi_i - s)^kappa h
    r = k.gamma_ab * grid.trapezoid_weights
    Wxi = product_weights(t, kp1, np.array(k.xis))
    r = r - gamma(kp1) * (np.array(k.etas) @ Wxi)
    KG = np.outer(t ** (k.alpha - 1.0) / (k.gamma_a * k.delta), r)
    KG -= product_weights(t, k.alpha)
    KGt = np.outer(t ** (k.alpha - 2.0) / (k.gamma_a1 * k.delta), r)
    KGt -= product_weights(t, k.alpha - 1.0)
    return KG, KGt


def green_solve_linear(k: GreenKernel, h: SampledFunction):
    """Solve the linear problem for a nonnegative forcing h sampled on a grid.

    Returns ``(u, uprime)`` as sampled functions; uprime comes from the
    G_t kernel, not from differencing u. The half line is truncated at the
    grid end; see :func:`tail_bound` for the size of the neglected part.

    Raises
    ------
    DivergenceError
        If h shows no decay at the end of the grid.
    """
    if np.any(h.values < 0.0):
        raise DomainError("the forcing h must be nonnegative")
    total = float(h.grid.trapezoid_weights @ h.values)
    if _tail_suspect(h, total):
        raise DivergenceError(
            f"forcing does not decay: h(S_max) * S_max = "
            f"{h.values[-1] * h.grid.S_max:.6g} against int h = {total:.6g}"
        )
    KG, KGt = kernel_matrices(k, h.grid)
    return SampledFunction(h.grid, KG @ h.values), SampledFunction(h.grid, KGt @ h.values)


def _tail_suspect(h, total):
    return h.values[-1] * h.grid.S_max > 0.1 * total


def tail_bound(k: GreenKernel, h: SampledFunction) -> np.ndarray:
    """Heuristic bound on the truncated part of ``int G(t, s) h(s) ds`` per node.

    Uses ``h(S_max) * S_max`` as a stand-in for ``int_{S_max}^inf h``, which
    holds for tails decaying at least like ``s^-2``.
    """
    rest = h.values[-1] * h.grid.S_max
    return k.L * h.grid.weight(k.alpha) * rest
