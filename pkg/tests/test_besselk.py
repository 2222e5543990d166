import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinsusy.besselk import (
    BesselOverflowWarning,
    BesselUnderflowWarning,
    besselk,
    besselk_derivative,
    besselk_scaled,
    recurrence_residual,
)

mpmath.mp.dps = 40
X_GRID = np.geomspace(1e-2, 1e2, 61)


def mp_k(q_twice, x):
    return float(mpmath.besselk(mpmath.mpf(q_twice) / 2, mpmath.mpf(x)))


def mp_k_scaled(q_twice, x):
    return float(mpmath.besselk(mpmath.mpf(q_twice) / 2, mpmath.mpf(x)) * mpmath.exp(mpmath.mpf(x)))


def test_reference_values():
    assert besselk(0, 1.0) == pytest.approx(0.42102443824070834, rel=1e-14)
    assert besselk(2, 1.0) == pytest.approx(0.6019072301972346, rel=1e-14)
    assert besselk(1, 1.0) == pytest.approx(0.4610685044478946, rel=1e-14)
    assert besselk(3, 2.0) == pytest.approx(0.179906657952092, rel=1e-13)


@pytest.mark.parametrize("n", range(0, 8))
def test_half_integer_closed_forms(n):
    # K_{n+1/2}(x) = sqrt(pi/2x) e^{-x} sum_k (n+k)!/(k!(n-k)!(2x)^k), summed here in exact rationals
    from fractions import Fraction

    for x in (0.05, 0.5, 1.0, 3.0, 17.0, 60.0):
        xf = Fraction(x)
        total = sum(
            Fraction(math.factorial(n + k), math.factorial(k) * math.factorial(n - k)) / (2 * xf) ** k
            for k in range(n + 1)
        )
        want = math.sqrt(math.pi / (2 * x)) * math.exp(-x) * float(total)
        assert besselk(2 * n + 1, x) == pytest.approx(want, rel=1e-13)
        assert besselk(-(2 * n + 1), x) == besselk(2 * n + 1, x)


@pytest.mark.parametrize("q_twice", [0, 1, 2, 3, 4, 5, 7, 10, 13, 20, 31, 40, 50])
def test_against_mpmath(q_twice):
    got = besselk_scaled(q_twice, X_GRID)
    want = np.array([mp_k_scaled(q_twice, x) for x in X_GRID])
    assert np.abs(got / want - 1).max() < 1e-12


def test_near_series_switch():
    x = np.array([1.999, 2.0, 2.001, 1e-6, 1e-9, 1e-12])
    for qt in (0, 2, 6):
        want = np.array([mp_k_scaled(qt, v) for v in x])
        assert np.abs(besselk_scaled(qt, x) / want - 1).max() < 1e-12


@pytest.mark.parametrize("q_twice", range(0, 21))
def test_recurrence_residual(q_twice):
    assert recurrence_residual(q_twice, X_GRID).max() < 1e-11


@given(st.integers(0, 20), st.floats(1e-2, 1e2))
def test_derivative_matches_central_difference(q_twice, x):
    h = 1e-5 * min(x, 1.0)
    fd = (besselk(q_twice, x + h) - besselk(q_twice, x - h)) / (2 * h)
    assert besselk_derivative(q_twice, x) == pytest.approx(fd, rel=1e-8)


@given(st.integers(0, 30), st.floats(1e-3, 50))
def test_monotone_in_order_and_argument(q_twice, x):
    a = besselk(q_twice, x)
    assert besselk(q_twice + 2, x) >= a > 0
    assert besselk(q_twice, 1.01 * x) < a


def test_shape_handling():
    assert isinstance(besselk(3, 1.5), float)
    out = besselk(3, np.array([[1.0, 2.0], [3.0, 4.0]]))
    assert out.shape == (2, 2)


@pytest.mark.parametrize("bad", [0.0, -1.0, float("nan")])
def test_domain(bad):
    with pytest.raises(ValueError):
        besselk(0, bad)


def test_underflow_warning():
    with pytest.warns(BesselUnderflowWarning):
        assert besselk(0, 800.0) == 0.0
    # scaled form stays finite
    assert besselk_scaled(0, 800.0) == pytest.approx(mp_k_scaled(0, 800.0), rel=1e-13)


def test_overflow_warning():
    with pytest.warns(BesselOverflowWarning):
        assert math.isinf(besselk(50, 1e-12))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        besselk(50, 1.0)
