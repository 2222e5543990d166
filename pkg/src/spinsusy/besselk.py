"""Modified Bessel functions of the second kind, K_q(x), for q in Z/2.

Orders are passed as ``q_twice`` (``q = q_twice / 2``). Negative orders are
folded with K_{-q} = K_q. Everything is computed in exponentially scaled form
``exp(x) K_q(x)`` and unscaled at the end.

* half-integer q: the finite elementary sum
  K_{n+1/2}(x) = sqrt(pi/2x) e^{-x} sum_k (n+k)! / (k! (n-k)! (2x)^k)
* integer q: K_0, K_1 from the ascending series (x <= 2) or Steed's
  continued fraction (x > 2), then upward recurrence
  K_{q+1} = K_{q-1} + (2q/x) K_q, which is stable for K.
"""
from __future__ import annotations

import math
import warnings

import numpy as np

SERIES_SWITCH = 2.0
EULER_GAMMA = 0.57721566490153286061
_MAX_CF_ITER = 10000
_EPS = 1e-17


class BesselUnderflowWarning(RuntimeWarning):
    """K_q(x) underflowed to zero in double precision."""


class BesselOverflowWarning(RuntimeWarning):
    """K_q(x) exceeds the double range (large q at tiny x); the value is +inf."""


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError("K_q(x) is defined here only for x > 0")
    return arr


def _half_integer_scaled(n: int, x: np.ndarray) -> np.ndarray:
    # n = q - 1/2 >= 0
    total = np.ones_like(x)
    inv2x = 1.0 / (2.0 * x)
    coeff = 1.0
    power = np.ones_like(x)
    for k in range(1, n + 1):
        # (n+k)!/(k!(n-k)!) from the previous term
        coeff = coeff * (n + k) * (n - k + 1) / k
        power = power * inv2x
        total = total + coeff * power
    return np.sqrt(np.pi / (2.0 * x)) * total


def _k01_series_scaled(x: np.ndarray):
    """exp(x) K_0, exp(x) K_1 from the ascending series; intended for x <= 2."""
    y = 0.25 * x * x
    lg = np.log(0.5 * x)
    # K_0 = -(ln(x/2) + gamma) I_0 + sum_{k>=1} y^k/(k!)^2 H_k
    # K_1 = 1/x + ln(x/2) I_1 - (x/4) sum_{k>=0} y^k/(k!(k+1)!) (psi(k+1)+psi(k+2))
    term0 = np.ones_like(x)  # y^k/(k!)^2
    term1 = np.ones_like(x)  # y^k/(k!(k+1)!)
    i0 = term0.copy()
    i1 = term1.copy()
    harm = 0.0
    s0 = np.zeros_like(x)
    s1 = (2.0 * (-EULER_GAMMA) + 1.0) * term1  # psi(1)+psi(2)
    for k in range(1, 40):
        term0 = term0 * y / (k * k)
        term1 = term1 * y / (k * (k + 1))
        harm += 1.0 / k
        i0 = i0 + term0
        i1 = i1 + term1
        s0 = s0 + term0 * harm
        # psi(k+1) + psi(k+2) = -2 gamma + 2 H_k + 1/(k+1)
        s1 = s1 + term1 * (-2.0 * EULER_GAMMA + 2.0 * harm + 1.0 / (k + 1))
        if np.all(term0 < _EPS * i0) and np.all(term1 < _EPS * i1):
            break
    i1 = 0.5 * x * i1
    k0 = -(lg + EULER_GAMMA) * i0 + s0
    k1 = 1.0 / x + lg * i1 - 0.25 * x * s1
    ex = np.exp(x)
    return k0 * ex, k1 * ex


def _k01_cf_scaled(x: np.ndarray):
    """Steed's continued fraction CF2 (Temme's normalisation) at order 0; x >= 2."""
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d.copy()
    delh = d.copy()
    q1 = np.zeros_like(x)
    q2 = np.ones_like(x)
    a1 = 0.25
    q = np.full_like(x, a1)
    c = a1
    a = -a1
    s = 1.0 + q * delh
    done = np.zeros(x.shape, dtype=bool)
    for i in range(2, _MAX_CF_ITER):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q = q + c * qnew
        b = b + 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        live = ~done
        h = np.where(live, h + delh, h)
        dels = q * delh
        s = np.where(live, s + dels, s)
        done |= np.abs(dels / s) < _EPS
        if done.all():
            break
    else:  # pragma: no cover - convergence is guaranteed for x >= 2
        raise RuntimeError("continued fraction did not converge")
    h = a1 * h
    k0 = np.sqrt(np.pi / (2.0 * x)) / s
    k1 = k0 * (x + 0.5 - h) / x
    return k0, k1


def _integer_scaled(n: int, x: np.ndarray) -> np.ndarray:
    small = x <= SERIES_SWITCH
    k0 = np.empty_like(x)
    k1 = np.empty_like(x)
    if np.any(small):
        k0[small], k1[small] = _k01_series_scaled(x[small])
    if np.any(~small):
        k0[~small], k1[~small] = _k01_cf_scaled(x[~small])
    if n == 0:
        return k0
    prev, cur = k0, k1
    with np.errstate(over="ignore"):
        for q in range(1, n):
            prev, cur = cur, prev + (2.0 * q / x) * cur
    return cur


def besselk_scaled(q_twice: int, x):
    """exp(x) K_{q_twice/2}(x)."""
    q_twice = abs(int(q_twice))
    arr = _as_array(x)
    flat = np.atleast_1d(arr).astype(float)
    with np.errstate(over="ignore"):
        if q_twice % 2:
            out = _half_integer_scaled((q_twice - 1) // 2, flat)
        else:
            out = _integer_scaled(q_twice // 2, flat)
    return out.reshape(arr.shape) if arr.shape else float(out[0])


def besselk(q_twice: int, x):
    """K_{q_twice/2}(x) for x > 0; scalar in, scalar out.

    Values too small for double precision return +0.0 and emit
    :class:`BesselUnderflowWarning`; values too large return +inf with
    :class:`BesselOverflowWarning`.
    """
    scaled = np.asarray(besselk_scaled(q_twice, x), dtype=float)
    with np.errstate(under="ignore"):
        out = scaled * np.exp(-np.asarray(x, dtype=float))
    if np.any((out == 0.0) & (scaled > 0.0)):
        warnings.warn("K_q(x) underflowed to zero", BesselUnderflowWarning, stacklevel=2)
    if np.any(np.isinf(out)):
        warnings.warn("K_q(x) overflowed to inf", BesselOverflowWarning, stacklevel=2)
    return out if out.shape else float(out)


def besselk_derivative(q_twice: int, x):
    """dK_q/dx = -(K_{q-1} + K_{q+1}) / 2."""
    return -0.5 * (besselk(q_twice - 2, x) + besselk(q_twice + 2, x))


def besselk_derivative_scaled(q_twice: int, x):
    """exp(x) dK_q/dx."""
    return -0.5 * (np.asarray(besselk_scaled(q_twice - 2, x)) + np.asarray(besselk_scaled(q_twice + 2, x)))


def recurrence_residual(q_twice: int, x) -> np.ndarray:
    """|K_{q+1} - K_{q-1} - (2q/x) K_q| / K_{q+1}, computed in scaled form."""
    x = np.asarray(x, dtype=float)
    q = q_twice / 2.0
    kp = np.asarray(besselk_scaled(q_twice + 2, x))
    km = np.asarray(besselk_scaled(q_twice - 2, x))
    k = np.asarray(besselk_scaled(q_twice, x))
    return np.abs(kp - km - (2.0 * q / x) * k) / kp
