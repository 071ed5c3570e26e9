import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from fracbvp import DomainError, Grid, SampledFunction, gamma, rl_derivative, rl_integral, rl_integral_at
from fracbvp.fractional import product_weights, weighted_sup_norm


def test_grid_graded_layout():
    g = Grid.graded(20.0, 64, 2.0)
    assert g.N == 64 and g.nodes[0] == 0.0 and g.S_max == pytest.approx(20.0)
    assert np.all(np.diff(g.nodes) > 0)
    assert g.trapezoid_weights.sum() == pytest.approx(20.0)
    with pytest.raises(ValueError):
        g.nodes[1] = 3.0


@pytest.mark.parametrize("S, N", [(0.0, 64), (-1.0, 64), (10.0, 8)])
def test_grid_rejects_bad_layout(S, N):
    with pytest.raises(DomainError):
        Grid.graded(S, N)


def test_sampled_function_interpolates():
    g = Grid.graded(4.0, 32)
    f = g.sample(lambda t: 2.0 * t + 1.0)
    assert f(1.2345) == pytest.approx(3.469, rel=1e-12)


def test_half_integral_of_one():
    g = Grid.graded(4.0, 64)
    out = rl_integral(g.sample(np.ones_like), 0.5).values
    np.testing.assert_allclose(out, 2.0 * np.sqrt(g.nodes / math.pi), atol=1e-13)


def test_integral_of_linear_is_exact():
    g = Grid.graded(4.0, 32)
    out = rl_integral(g.sample(lambda t: t), 1.5).values
    np.testing.assert_allclose(out, g.nodes**2.5 / gamma(3.5), atol=1e-12)


def test_integral_order_one_is_trapezoid():
    g = Grid.graded(3.0, 32)
    f = g.sample(np.exp)
    out = rl_integral(f, 1.0).values
    ref = np.concatenate([[0.0], np.cumsum(0.5 * g.steps * (f.values[1:] + f.values[:-1]))])
    np.testing.assert_allclose(out, ref, rtol=1e-13, atol=1e-14)


@pytest.mark.parametrize("order", [0.3, 0.5, 1.5, 2.5])
def test_product_weights_match_quad(order):
    # quad's algebraic weight handles the endpoint singularity independently
    g = Grid.graded(3.0, 24)
    vals = np.cos(g.nodes) + 1.5
    f = SampledFunction(g, vals)
    for tau in (0.7, 2.2, 3.0):
        pts = [x for x in g.nodes if 0 < x < tau]
        ref = 0.0
        edges = [0.0] + pts + [tau]
        for lo, hi in zip(edges[:-1], edges[1:]):
            ref += quad(lambda s: f(s), lo, hi, weight="alg", wvar=(0.0, order - 1.0))[0] \
                if hi == tau else quad(lambda s: (tau - s) ** (order - 1.0) * f(s), lo, hi)[0]
        got = rl_integral_at(f, order, np.array([tau]))[0]
        assert got == pytest.approx(ref / gamma(order), rel=1e-10)


def test_product_weights_reject_outside_target():
    with pytest.raises(DomainError):
        product_weights(np.linspace(0, 1, 20), 0.5, np.array([1.5]))
    with pytest.raises(DomainError):
        product_weights(np.linspace(0, 1, 20), 0.0)


def test_semigroup_second_order():
    errs = []
    for N in (64, 128, 256):
        g = Grid.graded(4.0, N)
        f = g.sample(lambda t: np.exp(-t))
        a = rl_integral(rl_integral(f, 0.5), 0.5).values
        b = rl_integral(f, 1.0).values
        errs.append(np.max(np.abs(a - b)))
    rates = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(rates > 1.5)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.2, 2.5), st.floats(0.2, 2.5))
def test_semigroup_property(a, b):
    g = Grid.graded(2.0, 256)
    f = g.sample(lambda t: 1.0 + t)
    lhs = rl_integral(rl_integral(f, a), b).values
    rhs = rl_integral(f, a + b).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-3 * np.max(np.abs(rhs))


def test_derivative_of_power():
    g = Grid.graded(4.0, 1024)
    d = rl_derivative(g.sample(np.sqrt), 0.5).values[2:]
    assert np.max(np.abs(d / (math.sqrt(math.pi) / 2) - 1)) <= 1e-3


def test_derivative_of_constant():
    g = Grid.graded(4.0, 1024)
    mask = g.nodes >= 0.5
    d = rl_derivative(g.sample(np.ones_like), 0.5).values[mask]
    exact = g.nodes[mask] ** -0.5 / math.sqrt(math.pi)
    assert np.max(np.abs(d / exact - 1)) <= 1e-2


@pytest.mark.parametrize("expo", [1.5, 0.5])
def test_derivative_null_space(expo):
    g = Grid.graded(4.0, 1024)
    mask = g.nodes >= 0.5
    d = rl_derivative(g.sample(lambda t: t**expo), 2.5).values[mask]
    assert np.max(np.abs(d)) <= 1e-6


def test_integer_derivative_agrees_with_classical():
    g = Grid.graded(4.0, 512)
    # one-sided differences at the right end are only first order
    mask = (g.nodes >= 0.5) & (g.nodes <= g.S_max - 0.5)
    d = rl_derivative(g.sample(lambda t: t**3), 2.0).values[mask]
    np.testing.assert_allclose(d, 6 * g.nodes[mask], rtol=1e-3)


@pytest.mark.parametrize("order", [0.0, -0.5, 3.5])
def test_derivative_order_domain(order):
    g = Grid.graded(1.0, 32)
    with pytest.raises(DomainError):
        rl_derivative(g.sample(np.ones_like), order)


def test_weighted_sup_norm_examples():
    g = Grid.graded(4.0, 64)
    assert weighted_sup_norm(g.sample(lambda t: 1.0 + t**1.5), 2.5) == pytest.approx(1.0)
    assert weighted_sup_norm(g.sample(np.zeros_like), 2.5) == 0.0
    with pytest.raises(DomainError):
        weighted_sup_norm(g.sample(np.ones_like), 1.5)
