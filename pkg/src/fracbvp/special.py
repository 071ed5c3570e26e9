"""Gamma function and the p-Laplacian maps."""

import math

import numpy as np

from .errors import DomainError

_gamma_ufunc = np.frompyfunc(math.gamma, 1, 1)


def gamma(x):
    """Euler gamma function for positive arguments, scalar or array.

    Raises
    ------
    DomainError
        If any argument is non-positive or not finite.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError(f"gamma requires finite x > 0, got {x!r}")
    if arr.ndim == 0:
        return math.gamma(float(arr))
    return _gamma_ufunc(arr).astype(float)


def conjugate_exponent(p):
    """Return q with 1/p + 1/q = 1."""
    if not p > 1.0:
        raise DomainError(f"p-Laplacian requires p > 1, got {p!r}")
    return p / (p - 1.0)


def phi_p(s, p):
    """The p-Laplacian map s -> |s|^(p-2) s."""
    if not p > 1.0:
        raise DomainError(f"p-Laplacian requires p > 1, got {p!r}")
    s = np.asarray(s, dtype=float)
    out = np.sign(s) * np.abs(s) ** (p - 1.0)
    return float(out) if out.ndim == 0 else out


def phi_q(s, p):
    """Inverse of :func:`phi_p`, i.e. phi_p with the conjugate exponent q.

    Note that the argument is the original ``p``; q is derived from it.
    """
    return phi_p(s, conjugate_exponent(p))
