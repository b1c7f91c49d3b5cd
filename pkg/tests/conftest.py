import numpy as np
import pytest

from contacthj import (
    compute_aubry,
    compute_constants,
    constant_solution,
    example1,
    example2,
)
from contacthj.fourier import FourierSeries


@pytest.fixture(scope="session")
def ex1_stable():
    """Example 1 with lambda = 1 (mu = 1 > 0)."""
    model = example1(FourierSeries.constant(1.0))
    s = constant_solution(0.0)
    a = compute_aubry(model, s, n=256)
    ledger = compute_constants(model, s, a)
    return model, s, a, ledger


@pytest.fixture(scope="session")
def ex1_unstable():
    """Example 1 with lambda = -1 (mu = -1 < 0)."""
    model = example1(FourierSeries.constant(-1.0))
    s = constant_solution(0.0)
    a = compute_aubry(model, s, n=256)
    ledger = compute_constants(model, s, a)
    return model, s, a, ledger


@pytest.fixture(scope="session")
def ex1_wavy():
    """Example 1 with lambda = 1 + 0.5 sin 2 pi x (mu = 1, nonconstant rho)."""
    model = example1(FourierSeries(1.0, (), (0.5,)))
    s = constant_solution(0.0)
    a = compute_aubry(model, s, n=256)
    ledger = compute_constants(model, s, a)
    return model, s, a, ledger


@pytest.fixture(scope="session")
def ex2_pair():
    """Example 2 with V = 1 + 0.3 sin 2 pi x, lambda = 1; both branches."""
    model = example2(FourierSeries(1.0, (), (0.3,)), FourierSeries.constant(1.0))
    out = {}
    for sel in (1.0, -1.0):
        s = constant_solution(sel)
        a = compute_aubry(model, s, n=256)
        ledger = compute_constants(model, s, a)
        out[sel] = (s, a, ledger)
    return model, out


def grid(n):
    return np.arange(n) / n
