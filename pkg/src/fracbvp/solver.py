"""Fixed-point solution of the integral equation ``u = T u`` on a truncated grid.

    (T u)(t) = int_0^S_max G(t, s) phi_q(I^gamma[a f(., u, u')](s)) ds

The inner function is computed once per sweep, then one kernel quadrature
per node gives both ``T u`` and its derivative through G_t. The problem
guarantees existence only; convergence of the iteration is empirical and
every solve reports its fixed-point residual.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import DivergenceError, DomainError, NumericalError, UnsupportedError
from .families import AffineNonlinearity
from .fractional import product_weights, rl_derivative, rl_integral_at, weighted_sup_norm
from .green import GreenKernel, kernel_matrices
from .grid import Grid, SampledFunction, evaluate_on
from .problem import ProblemSpec, sample_coefficient
from .special import phi_p, phi_q

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class WeightedFunction:
    """A pair ``(u, u')`` sampled on a grid, an element of the weighted space E."""

    grid: Grid
    u: np.ndarray
    uprime: np.ndarray

    def __post_init__(self):
        for name in ("u", "uprime"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != self.grid.nodes.shape or not np.all(np.isfinite(arr)):
                raise DomainError(f"{name} must be finite with one value per node")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def zeros(cls, grid: Grid) -> WeightedFunction:
        z = np.zeros_like(grid.nodes)
        return cls(grid, z, z)

    def norm(self, alpha: float) -> float:
        """``max(||u||_inf, ||u'||_inf)`` with the weight ``1 + t^(alpha-1)``."""
        return max(weighted_sup_norm(SampledFunction(self.grid, self.u), alpha),
                   weighted_sup_norm(SampledFunction(self.grid, self.uprime), alpha))

    def __sub__(self, other):
        return WeightedFunction(self.grid, self.u - other.u, self.uprime - other.uprime)

    def weighted(self, alpha: float):
        w = self.grid.weight(alpha)
        return self.u / w, self.uprime / w


@dataclass(frozen=True)
class SolverConfig:
    grid: Grid
    omega: float = 1.0
    tol: float = 1e-10
    max_iter: int = 500

    def __post_init__(self):
        if not 0.0 < self.omega <= 1.0:
            raise DomainError(f"damping must lie in (0, 1], got {self.omega}")
        if not self.tol > 0.0:
            raise DomainError(f"tol must be positive, got {self.tol}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise DomainError(f"max_iter must be a positive integer, got {self.max_iter}")


@dataclass(frozen=True)
class Solution:
    w: WeightedFunction
    iterations: int
    final_step_norm: float
    residual: float
    converged: bool
    step_history: tuple = field(default=(), repr=False)


class FixedPointOperator:
    """The discretised operator T for one problem on one grid.

    Assembles the fractional-integral and kernel quadrature matrices once;
    each call then costs two dense matrix-vector products per output.
    """

    def __init__(self, spec: ProblemSpec, kernel: GreenKernel, grid: Grid):
        self.spec = spec
        self.kernel = kernel
        self.grid = grid
        self.a = sample_coefficient(spec, grid)
        self.W_gamma = product_weights(grid.nodes, spec.gamma_ord)
        self.KG, self.KGt = kernel_matrices(kernel, grid)

    def forcing(self, w: WeightedFunction) -> np.ndarray:
        """Nodal values of ``a(t) f(t, u, u')``."""
        t = self.grid.nodes
        fv = np.broadcast_to(np.asarray(self.spec.f(t, w.u, w.uprime), dtype=float), t.shape)
        bad = ~np.isfinite(fv) | (fv < 0.0)
        if np.any(bad):
            k = int(np.argmax(bad))
            raise DomainError(
                f"f must be finite and nonnegative; f({t[k]:.6g}, {w.u[k]:.6g}, "
                f"{w.uprime[k]:.6g}) = {fv[k]!r}"
            )
        return self.a * fv

    def inner(self, w: WeightedFunction) -> np.ndarray:
        """``g(s) = phi_q(I^gamma[a f](s))`` at the nodes."""
        return phi_q(self.W_gamma @ self.forcing(w), self.spec.p)

    def __call__(self, w: WeightedFunction) -> WeightedFunction:
        if w.grid is not self.grid and not np.array_equal(w.grid.nodes, self.grid.nodes):
            raise DomainError("function and operator live on different grids")
        g = self.inner(w)
        u = self.KG @ g
        up = self.KGt @ g
        u[0] = up[0] = 0.0
        return WeightedFunction(self.grid, u, up)


def apply_T(spec: ProblemSpec, kernel: GreenKernel, w: WeightedFunction) -> WeightedFunction:
    """One application of T to ``w``."""
    return FixedPointOperator(spec, kernel, w.grid)(w)


def picard_solve(spec: ProblemSpec, kernel: GreenKernel, cfg: SolverConfig,
                 w0: WeightedFunction | None = None) -> Solution:
    """Damped Picard iteration ``w <- (1-omega) w + omega T w`` from ``w0 = 0``.

    Stops when the weighted-norm step drops to ``cfg.tol``. Running out of
    iterations returns an unconverged Solution.

    Raises
    ------
    DivergenceError
        If the step norm grows tenfold over five iterations.
    """
    T = FixedPointOperator(spec, kernel, cfg.grid)
    alpha = spec.alpha
    w = WeightedFunction.zeros(cfg.grid) if w0 is None else w0
    steps = []
    converged = False
    for it in range(1, cfg.max_iter + 1):
        Tw = T(w)
        if cfg.omega == 1.0:
            w_new = Tw
        else:
            w_new = WeightedFunction(cfg.grid,
                                     (1 - cfg.omega) * w.u + cfg.omega * Tw.u,
                                     (1 - cfg.omega) * w.uprime + cfg.omega * Tw.uprime)
        step = (w_new - w).norm(alpha)
        steps.append(step)
        w = w_new
        log.debug("picard iteration %d: step %.3e", it, step)
        if step <= cfg.tol:
            converged = True
            break
        if it > 5 and step > 10.0 * steps[-6]:
            raise DivergenceError(
                f"Picard step grew from {steps[-6]:.3e} to {step:.3e} over five iterations"
            )
    residual = (T(w) - w).norm(alpha)
    if not converged:
        log.warning("Picard iteration stopped after %d sweeps, step %.3e", it, steps[-1])
    return Solution(w, it, steps[-1], residual, converged, tuple(steps))


def linear_oracle_solve(spec: ProblemSpec, kernel: GreenKernel, grid: Grid) -> Solution:
    """Direct dense solve for ``p = 2`` and ``f = c0 + c1 u + c2 v``.

    With ``phi_q`` the identity, the discrete fixed-point equation is linear
    in the stacked unknown ``x = (u, u')``: ``(I - K) x = b``.

    Raises
    ------
    UnsupportedError
        If ``p != 2`` or ``f`` is not declared affine.
    NumericalError
        If the system is singular or badly conditioned.
    """
    if spec.p != 2.0:
        raise UnsupportedError(f"the linear oracle needs p = 2, got p = {spec.p}")
    if not isinstance(spec.f, AffineNonlinearity):
        raise UnsupportedError("the linear oracle needs an AffineNonlinearity")
    T = FixedPointOperator(spec, kernel, grid)
    t = grid.nodes
    c0, c1, c2 = (evaluate_on(c, t) for c in (spec.f.c0, spec.f.c1, spec.f.c2))
    stacked = np.vstack([T.KG, T.KGt])
    lift = stacked @ (T.W_gamma * T.a[None, :])
    n = t.size
    K = np.hstack([lift * c1[None, :], lift * c2[None, :]])
    b = lift @ c0
    A = np.eye(2 * n) - K
    try:
        x = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"dense system is singular: {exc}") from None
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > 1e12:
        raise NumericalError(f"dense system is ill-conditioned (cond = {cond:.3e})")
    u, up = x[:n].copy(), x[n:].copy()
    # node 0 is pinned by the boundary conditions
    u[0] = up[0] = 0.0
    w = WeightedFunction(grid, u, up)
    residual = (T(w) - w).norm(spec.alpha)
    return Solution(w, 0, 0.0, residual, True)


@dataclass(frozen=True)
class ResidualReport:
    fixed_point_residual: float
    bc_u0: float
    bc_up0: float
    multipoint_gap: float
    dalpha0_gap: float


def multipoint_gap(kernel: GreenKernel, w: WeightedFunction) -> float:
    """``|D^(alpha-1) u(S_max) - sum_i eta_i I^beta u'(xi_i)|``.

    The limit at infinity is taken at the end of the grid.
    """
    u = SampledFunction(w.grid, w.u)
    lhs = rl_derivative(u, kernel.alpha - 1.0).values[-1]
    rhs = np.array(kernel.etas) @ rl_integral_at(
        SampledFunction(w.grid, w.uprime), kernel.beta, np.array(kernel.xis))
    return float(abs(lhs - rhs))


def residual_report(spec: ProblemSpec, kernel: GreenKernel, w: WeightedFunction) -> ResidualReport:
    """Fixed-point residual and boundary-condition gaps of a candidate solution."""
    T = FixedPointOperator(spec, kernel, w.grid)
    # D^alpha annihilates t^(alpha-1), the component differencing resolves
    # worst near 0; u/t^(alpha-1) tends to its coefficient as t -> 0
    t = w.grid.nodes
    lead = w.u[1] / t[1] ** (spec.alpha - 1.0)
    core = SampledFunction(w.grid, w.u - lead * t ** (spec.alpha - 1.0))
    Dalpha = rl_derivative(core, spec.alpha).values
    return ResidualReport(
        fixed_point_residual=(T(w) - w).norm(spec.alpha),
        bc_u0=float(abs(w.u[0])),
        bc_up0=float(abs(w.uprime[0])),
        multipoint_gap=multipoint_gap(kernel, w),
        dalpha0_gap=float(abs(phi_p(Dalpha[1], spec.p))),
    )
