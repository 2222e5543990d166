"""L^2 normalisation of exact radial states by adaptive quadrature."""
from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad

from ..states import BesselState


def _density(state: BesselState, r: float) -> float:
    v = state.evaluate(np.array([r]))[:, 0]
    return float(np.dot(v, v))


def norm_squared(state: BesselState, rtol: float = 1e-12) -> float:
    """Integral over (0, inf) of sum_c |phi_c(r)|^2."""
    if state.is_zero():
        return 0.0
    length = 1.0 / state.beta
    p_max = max((p for comp in state.components for (p, _) in comp), default=0.0)
    # split where the density is largest so quad sees the peak and the tail separately
    cuts = [0.0, length, max(2.0, 2.0 * p_max + 2.0) * length, 60.0 * length * (1 + p_max)]
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        val, _ = quad(lambda r: _density(state, r), a, b, epsabs=0.0, epsrel=rtol, limit=400)
        total += val
    tail, _ = quad(lambda r: _density(state, r), cuts[-1], np.inf, epsabs=0.0, epsrel=rtol, limit=200)
    return total + tail


def normalize(state: BesselState) -> BesselState:
    """Rescale to unit L^2 norm on (0, inf); the sign of the coefficients is kept."""
    n2 = norm_squared(state)
    if not n2 > 0 or not math.isfinite(n2):
        raise ValueError("state is not normalisable (zero or infinite norm)")
    out = state.scaled(1.0 / math.sqrt(n2))
    out.norm = 1.0
    return out
