"""Finite-difference discretisation and banded eigensolver for radial blocks.

Each radial component phi_c with centrifugal term (l_c^2 - 1/4)/r^2 is
discretised through R_c = phi_c / sqrt(r) in flux form,

    -(1/r) d/dr (r dR/dr) + l_c^2/r^2 R,

on the cell-centred grid r_i = (i + 1/2) h, then symmetrised back to phi.
This is a second-order central-difference scheme for -d^2/dr^2 + V that keeps
O(h^2) convergence at l = 0, where V contains the critical -1/(4 r^2) and
plain second differences converge only logarithmically. Components at one
grid point are interleaved, giving a symmetric band matrix of half-bandwidth
equal to the number of components.

Eigenvalues come from bisection on Sylvester inertia counts of the banded
LDL^T factorisation of H - sigma I, which is serial and therefore bit-for-bit
deterministic.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping

import numba
import numpy as np
from scipy.linalg import solve_banded

from ..radial import RadialBlock

DEFAULT_POINTS = 8000


class CoarseGridWarning(UserWarning):
    pass


@dataclass(frozen=True)
class RadialGrid:
    r_max: float
    n_points: int

    def __post_init__(self):
        if not self.r_max > 0 or self.n_points < 2:
            raise ValueError("grid needs r_max > 0 and at least two points")

    @property
    def h(self) -> float:
        return self.r_max / self.n_points

    @property
    def r_min(self) -> float:
        return 0.5 * self.h

    @property
    def points(self) -> np.ndarray:
        return (np.arange(self.n_points) + 0.5) * self.h

    def refined(self, factor: int = 2) -> "RadialGrid":
        return RadialGrid(self.r_max, self.n_points * factor)

    def to_json(self) -> dict:
        return {"r_max": self.r_max, "n_points": self.n_points, "h": self.h}

    @classmethod
    def default(cls, j: float, levels: int, lambda_t: float, n_points: int = DEFAULT_POINTS) -> "RadialGrid":
        """r_max = 40 (2(j+n)+1)^2 / lambda with n the highest requested level.

        ``n_points`` is raised when needed so the grid is not flagged as coarse.
        """
        top = float(j) + max(levels - 1, 0)
        r_max = 40.0 * (2.0 * top + 1.0) ** 2 / lambda_t
        return cls(r_max, max(n_points, math.ceil(2.0 * lambda_t * r_max)))

    def covers(self, j: float, levels: int, lambda_t: float) -> bool:
        top = float(j) + levels
        return self.r_max >= 10.0 * (2.0 * top + 1.0) ** 2 / lambda_t


@dataclass
class DiscretizedHamiltonian:
    grid: RadialGrid
    size: int
    band: np.ndarray = field(repr=False)  # band[k, i] = H[i + k, i]
    coarse: bool = False
    label: str = ""

    @property
    def dim(self) -> int:
        return self.band.shape[1]

    @property
    def bandwidth(self) -> int:
        return self.band.shape[0] - 1

    def to_dense(self) -> np.ndarray:
        n, b = self.dim, self.bandwidth
        out = np.zeros((n, n))
        for k in range(b + 1):
            idx = np.arange(n - k)
            out[idx + k, idx] = self.band[k, : n - k]
            out[idx, idx + k] = self.band[k, : n - k]
        return out

    def gershgorin(self) -> tuple[float, float]:
        n, b = self.dim, self.bandwidth
        radius = np.zeros(n)
        for k in range(1, b + 1):
            a = np.abs(self.band[k, : n - k])
            radius[: n - k] += a
            radius[k:] += a
        return float((self.band[0] - radius).min()), float((self.band[0] + radius).max())


def discretize(target, grid: RadialGrid, label: str = "") -> DiscretizedHamiltonian:
    """Band matrix of -d^2/dr^2 + V for a RadialBlock or a Laurent map {-2: V2, -1: V1}."""
    if isinstance(target, RadialBlock):
        laurent = target.laurent()
        label = label or target.label
    else:
        laurent = target
    v2 = np.atleast_2d(np.asarray(laurent[-2], dtype=float))
    v1 = np.atleast_2d(np.asarray(laurent.get(-1, np.zeros_like(v2)), dtype=float))
    if np.abs(v2 - np.diag(np.diag(v2))).max() > 0:
        raise ValueError("the 1/r^2 part must be diagonal (centrifugal)")
    d = v2.shape[0]
    n, h = grid.n_points, grid.h
    r = grid.points
    r_hi = (np.arange(n) + 1.0) * h
    r_lo = np.arange(n) * h
    band = np.zeros((d + 1, n * d))
    for c in range(d):
        l2 = v2[c, c] + 0.25
        band[0, c::d] = (r_hi + r_lo) / (h * h * r) + l2 / r**2 + v1[c, c] / r
        band[d, c::d][: n - 1] = -r_hi[:-1] / (h * h * np.sqrt(r[:-1] * r[1:]))
    for k in range(1, d):
        for c in range(d - k):
            band[k, c::d] = v1[c + k, c] / r
    # h^2 l^2 / r_min^2 = 4 l^2 for every h on this grid, so only the Coulomb part
    # can tell a coarse grid from a fine one
    vmax = float(np.abs(v1).max() / r[0])
    coarse = h * h * vmax > 1.0
    if coarse:
        warnings.warn(f"grid spacing {h:.3g} is coarse for |V| up to {vmax:.3g}", CoarseGridWarning, stacklevel=2)
    return DiscretizedHamiltonian(grid, d, band, coarse, label)


@numba.njit(cache=True)
def _count_below(band, sigma):
    """Number of eigenvalues below sigma (negative pivots of LDL^T of H - sigma I)."""
    b = band.shape[0] - 1
    n = band.shape[1]
    ell = np.zeros((b + 1, n))  # ell[k, i] = L[i + k, i]
    d = np.zeros(n)
    neg = 0
    tiny = 1e-300
    for i in range(n):
        s = band[0, i] - sigma
        for k in range(max(0, i - b), i):
            lik = ell[i - k, k]
            s -= lik * lik * d[k]
        if s == 0.0:
            s = tiny
        d[i] = s
        if s < 0.0:
            neg += 1
        for j in range(i + 1, min(n, i + b + 1)):
            t = band[j - i, i]
            for k in range(max(0, j - b), i):
                t -= ell[j - k, k] * ell[i - k, k] * d[k]
            ell[j - i, i] = t / s
    return neg


def count_below(H: DiscretizedHamiltonian, sigma: float) -> int:
    return int(_count_below(H.band, float(sigma)))


def lowest_eigenvalues(H: DiscretizedHamiltonian, m: int, rtol: float = 1e-14) -> list[float]:
    """The m smallest eigenvalues, ascending, by inertia bisection."""
    if m < 1:
        raise ValueError("m must be at least 1")
    if m > H.dim:
        raise ValueError(f"requested {m} eigenvalues of a {H.dim}-dimensional matrix")
    lo0, hi0 = H.gershgorin()
    out = []
    lo = lo0
    for k in range(m):
        a, c = lo, hi0
        while c - a > rtol * max(abs(a), abs(c)) and c - a > 1e-300:
            mid = 0.5 * (a + c)
            if mid == a or mid == c:
                break
            if _count_below(H.band, mid) > k:
                c = mid
            else:
                a = mid
        val = 0.5 * (a + c)
        out.append(val)
        lo = a
    return out


def eigenvector(H: DiscretizedHamiltonian, e: float, iterations: int = 3) -> np.ndarray:
    """Inverse iteration at eigenvalue ``e``; returned with shape (size, n_points), sum h|u|^2 = 1."""
    n, b = H.dim, H.bandwidth
    ab = np.zeros((2 * b + 1, n))
    for k in range(b + 1):
        # diagonal ordered form for solve_banded: ab[u + i - j, j] = A[i, j]
        ab[b + k, : n - k] = H.band[k, : n - k]
        ab[b - k, k:] = H.band[k, : n - k]
    shift = e * (1.0 + 1e-12) if e != 0 else 1e-14
    ab[b] -= shift
    rng = np.random.default_rng(12345)
    x = rng.standard_normal(n)
    for _ in range(iterations):
        x = solve_banded((b, b), ab, x)
        x /= np.linalg.norm(x)
    u = x.reshape(H.grid.n_points, H.size).T
    return u / math.sqrt(H.grid.h)


def richardson(e_h: float, e_h2: float) -> float:
    """h^2 extrapolation from spacings h and h/2."""
    return (4.0 * e_h2 - e_h) / 3.0


def convergence_order(e_h: float, e_h2: float, e_h4: float) -> float:
    """Observed order p from three spacings h, h/2, h/4."""
    num, den = e_h - e_h2, e_h2 - e_h4
    if den == 0.0 or num / den <= 0:
        return float("nan")
    return math.log2(num / den)
