import numpy as np
import pytest

from fracbvp import Grid, ProblemSpec, make_kernel
from fracbvp.families import Indicator, LinearBound, example41_f

THIRD = 1.0 / 3.0
EX41 = dict(alpha=2.5, beta=0.5, etas=[THIRD, THIRD], xis=[THIRD, 2 * THIRD])


@pytest.fixture
def kernel41():
    return make_kernel(**EX41)


@pytest.fixture
def grid20():
    return Grid.graded(20.0, 256, 2.0)


def demo_spec(**overrides):
    """Worked-example kernel and f with gamma = 1/5, p = 3/2, a = 1{t <= 1}."""
    params = dict(alpha=2.5, beta=0.5, gamma_ord=0.2, p=1.5, etas=EX41["etas"], xis=EX41["xis"],
                  a=Indicator(1.0), f=example41_f(), f_weighted_bound=LinearBound(THIRD, 1 / 9))
    params.update(overrides)
    return ProblemSpec(**params)


@pytest.fixture
def spec_demo():
    return demo_spec()


def weighted_err(grid, alpha, x, y):
    return float(np.max(np.abs(np.asarray(x) - np.asarray(y)) / grid.weight(alpha)))


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
