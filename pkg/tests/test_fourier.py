import numpy as np
import pytest

from contacthj.fourier import MAX_MODES, FourierSeries


def test_constant_series():
    f = FourierSeries.constant(2.5)
    x = np.linspace(0.0, 1.0, 7)
    assert np.allclose(f(x), 2.5)


def test_evaluation_matches_closed_form():
    f = FourierSeries(1.0, (0.3,), (0.2, -0.1))
    x = np.array([0.0, 0.17, 0.5, 0.93])
    expect = (
        1.0
        + 0.3 * np.cos(2 * np.pi * x)
        + 0.2 * np.sin(2 * np.pi * x)
        - 0.1 * np.sin(4 * np.pi * x)
    )
    assert np.allclose(f(x), expect, atol=1e-14)


def test_derivative_against_finite_difference():
    f = FourierSeries(0.5, (0.4, 0.1), (0.2,))
    df = f.derivative()
    x = np.linspace(0.0, 1.0, 50, endpoint=False)
    h = 1e-6
    fd = (f(x + h) - f(x - h)) / (2 * h)
    assert np.allclose(df(x), fd, atol=1e-7)


def test_derivative_of_constant_is_zero():
    df = FourierSeries.constant(3.0).derivative()
    assert np.allclose(df(np.linspace(0, 1, 9)), 0.0)


def test_periodicity():
    f = FourierSeries(0.0, (1.0,), (2.0, 0.5))
    x = np.linspace(0.0, 1.0, 11)
    assert np.allclose(f(x), f(x + 1.0), atol=1e-12)


def test_max_abs():
    # 1 + cos peaks at exactly 2
    f = FourierSeries(1.0, (1.0,), ())
    assert f.max_abs() == pytest.approx(2.0, abs=1e-6)


def test_mode_cap():
    with pytest.raises(ValueError):
        FourierSeries(0.0, tuple(0.1 for _ in range(MAX_MODES + 1)), ())
