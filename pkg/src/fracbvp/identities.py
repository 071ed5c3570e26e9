"""Self-check suites: fractional-calculus identities and Green-kernel bounds.

Each check compares an observed maximum error with a tolerance pinned at
the reference resolution ``N = 1024`` and scaled by ``(1024 / N)^order``
on coarser grids, where ``order`` is the expected convergence order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fractional import rl_derivative, rl_integral
from .green import eval_G, eval_Gt, make_kernel
from .grid import Grid
from .special import gamma, phi_p, phi_q

REFERENCE_N = 1024
# Derivatives computed through finite differences are unreliable on the
# first grid cells; the power-law check skips t_0 and t_1, the others look
# only at t >= AWAY_FROM_ZERO.
FIRST_RELIABLE_NODE = 2
AWAY_FROM_ZERO = 0.5

EXAMPLE41 = dict(alpha=2.5, beta=0.5, etas=(1 / 3, 1 / 3), xis=(1 / 3, 2 / 3))


@dataclass(frozen=True)
class CheckResult:
    name: str
    error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.error <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: max error {self.error:.3e} (tolerance {self.tolerance:.1e})"


def _away_mask(grid):
    return grid.nodes >= min(AWAY_FROM_ZERO, 0.5 * grid.S_max)


def _scaled(tol, grid, order):
    return tol * max(1.0, (REFERENCE_N / grid.N) ** order)


def semigroup_check(grid: Grid) -> CheckResult:
    """``I^(1/2) I^(1/2) 1`` against ``I^1 1 = t``."""
    one = grid.sample(np.ones_like)
    twice = rl_integral(rl_integral(one, 0.5), 0.5)
    err = np.max(np.abs(twice.values - rl_integral(one, 1.0).values))
    return CheckResult("semigroup I^1/2 I^1/2 1 = I^1 1", float(err), _scaled(1e-3, grid, 2))


def power_law_check(grid: Grid) -> CheckResult:
    """``D^(1/2) t^(1/2) = Gamma(3/2) = sqrt(pi)/2``, relative, nodes k >= 2."""
    d = rl_derivative(grid.sample(np.sqrt), 0.5).values[FIRST_RELIABLE_NODE:]
    exact = math.sqrt(math.pi) / 2
    err = np.max(np.abs(d / exact - 1.0))
    return CheckResult("power law D^1/2 t^1/2 = sqrt(pi)/2", float(err), _scaled(1e-3, grid, 1))


def constant_derivative_check(grid: Grid) -> CheckResult:
    """``D^(1/2) 1 = t^(-1/2) / Gamma(1/2)``, relative, for t >= 1/2."""
    t = grid.nodes
    mask = _away_mask(grid)
    d = rl_derivative(grid.sample(np.ones_like), 0.5).values[mask]
    exact = t[mask] ** -0.5 / gamma(0.5)
    err = np.max(np.abs(d / exact - 1.0))
    return CheckResult("D^1/2 1 = t^-1/2 / Gamma(1/2)", float(err), _scaled(1e-2, grid, 2))


def kernel_power_check(grid: Grid) -> CheckResult:
    """``D^(5/2) t^(5/2 - j) = 0`` for j = 1, 2, for t >= 1/2."""
    mask = _away_mask(grid)
    err = 0.0
    for expo in (1.5, 0.5):
        d = rl_derivative(grid.sample(lambda s, e=expo: s**e), 2.5).values[mask]
        err = max(err, float(np.max(np.abs(d))))
    return CheckResult("null space D^5/2 t^3/2 = D^5/2 t^1/2 = 0", err, _scaled(1e-6, grid, 2))


def left_inverse_check(grid: Grid) -> CheckResult:
    """``D^a I^a f = f`` for ``f = exp(-t)``, ``a`` in {1/2, 3/2}, for t >= 1/2."""
    mask = _away_mask(grid)
    f = grid.sample(lambda s: np.exp(-s))
    err = 0.0
    for order in (0.5, 1.5):
        back = rl_derivative(rl_integral(f, order), order)
        err = max(err, float(np.max(np.abs(back.values - f.values)[mask])))
    return CheckResult("left inverse D^a I^a f = f", err, _scaled(1e-3, grid, 1))


def gamma_recurrence_check(samples: int = 2000, seed: int = 0) -> CheckResult:
    x = np.random.default_rng(seed).uniform(1e-6, 49.0, samples)
    err = np.max(np.abs(gamma(x + 1.0) / (x * gamma(x)) - 1.0))
    return CheckResult("gamma recurrence Gamma(x+1) = x Gamma(x)", float(err), 1e-10)


def phi_inverse_check() -> CheckResult:
    mags = np.logspace(-6, 6, 241)
    x = np.concatenate([mags, -mags])
    err = 0.0
    for p in (1.5, 2.0, 3.0):
        err = max(err, float(np.max(np.abs(phi_q(phi_p(x, p), p) / x - 1.0))))
    return CheckResult("phi_q(phi_p(x)) = x", err, 1e-12)


def kernel_bound_sweep(S_max: float = 4.0, samples: int = 100_000, seed: int = 0,
                       kernel=None):
    """Random (t, s) pairs against ``0 <= G/(1+t^(alpha-1)) <= L`` and its G_t twin.

    Returns the check results and the number of violations.
    """
    k = kernel if kernel is not None else make_kernel(**EXAMPLE41)
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.0, S_max, samples)
    s = rng.uniform(0.0, 2.0 * S_max, samples)
    w = 1.0 + t ** (k.alpha - 1.0)
    G = eval_G(k, t, s) / w
    Gt = eval_Gt(k, t, s) / w
    capG = k.L * (1 + 1e-9)
    capGt = (k.alpha - 1.0) * k.L * (1 + 1e-9)
    violations = int(np.sum((G < 0) | (G > capG)) + np.sum((Gt < 0) | (Gt > capGt)))
    # error = amount by which the worst sample leaves [0, cap]
    errG = max(0.0, float(-G.min()), float(G.max() - capG))
    errGt = max(0.0, float(-Gt.min()), float(Gt.max() - capGt))
    results = [
        CheckResult(f"kernel bound 0 <= G/(1+t^(a-1)) <= L [max {G.max():.6f}, L = {k.L:.6f}]",
                    errG, 0.0),
        CheckResult(f"kernel bound 0 <= G_t/(1+t^(a-1)) <= (a-1)L [max {Gt.max():.6f}]",
                    errGt, 0.0),
    ]
    return results, violations


def run_all(grid: Grid | None = None, kernel_samples: int = 100_000):
    """Run every suite on ``grid`` (default N=1024, S_max=4, grading 2)."""
    grid = grid if grid is not None else Grid.graded(4.0, REFERENCE_N, 2.0)
    results = [
        semigroup_check(grid),
        power_law_check(grid),
        constant_derivative_check(grid),
        kernel_power_check(grid),
        left_inverse_check(grid),
        gamma_recurrence_check(),
        phi_inverse_check(),
    ]
    bounds, _ = kernel_bound_sweep(grid.S_max, kernel_samples)
    return results + bounds
