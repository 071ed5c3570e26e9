"""Numerical toolkit for m-point p-Laplacian fractional boundary value problems
on the half line.

The problem is ``D^gamma(phi_p(D^alpha u)) + a(t) f(t, u, u') = 0`` on
``[0, inf)`` with ``u(0) = u'(0) = 0``, ``D^alpha u(0) = 0`` and the
multi-point condition ``lim D^(alpha-1) u = sum_i eta_i I^beta u'(xi_i)``.
The package evaluates its Green's function, checks the standing hypotheses,
issues existence certificates and solves the equivalent integral equation
by fixed-point iteration.
"""

__version__ = "0.1.0"

from .errors import (
    DivergenceError,
    DomainError,
    FracBVPError,
    HypothesisError,
    NumericalError,
    UnsupportedError,
)
from .families import AffineNonlinearity, Constant, Exponential, Indicator, LinearBound, Weighted, example41_f
from .fractional import rl_derivative, rl_integral, rl_integral_at, weighted_sup_norm
from .green import GreenKernel, eval_G, eval_Gt, green_solve_linear, make_kernel
from .grid import Grid, SampledFunction
from .problem import (
    ExistenceCertificate,
    ProblemSpec,
    check_H1,
    check_H3,
    compute_M,
    estimate_B_delta,
    existence_certificate,
)
from .solver import (
    Solution,
    SolverConfig,
    WeightedFunction,
    apply_T,
    linear_oracle_solve,
    picard_solve,
    residual_report,
)
from .special import gamma, phi_p, phi_q
