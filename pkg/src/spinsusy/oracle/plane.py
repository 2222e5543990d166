"""Conserved operators of the planar spin Hamiltonian on a square grid.

Reduced units, 2m = 1:

    H   = -Laplacian + mu(n) / r
    J_z = x p_y - y p_x + S_z
    A_x = (J_z p_x + p_x J_z) / 2 - (m / r) mu(n) y
    A_y = (J_z p_y + p_y J_z) / 2 + (m / r) mu(n) x

with m = 1/2 and p = -i grad by central differences. The sign of the mu
terms is the one for which A commutes with H when p = -i grad. Exact commutators
[H, X] vanish for X = J_z, A_x, A_y, and [A_x, A_y] = -2 m i J_z H. On the
grid they are O(h^2), which is what :func:`symmetry_residuals` measures on a
bundle of test functions that vanish to high order at the origin.

The grid is cell-centred, so the origin (where mu(n) is undefined) is never
a sample point.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..halfint import HalfInt
from ..spinalg import CouplingSet, SpinRep, mu_hat_field, spin_matrices

MASS = 0.5
BOUNDARY_TOL = 1e-10


@dataclass(frozen=True)
class PlaneGrid:
    extent: float
    n: int

    def __post_init__(self):
        if not self.extent > 0 or self.n < 8 or self.n % 2:
            raise ValueError("plane grid needs extent > 0 and an even n >= 8")

    @property
    def h(self) -> float:
        return self.extent / self.n

    @property
    def axis(self) -> np.ndarray:
        return -0.5 * self.extent + (np.arange(self.n) + 0.5) * self.h

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.axis, self.axis, indexing="ij")

    def refined(self) -> "PlaneGrid":
        return PlaneGrid(self.extent, 2 * self.n)

    def to_json(self) -> dict:
        return {"extent": self.extent, "n": self.n, "h": self.h}


def _dx(f: np.ndarray, h: float, axis: int) -> np.ndarray:
    out = np.zeros_like(f)
    sl = [slice(None)] * f.ndim
    hi, lo, mid = list(sl), list(sl), list(sl)
    hi[axis], lo[axis], mid[axis] = slice(2, None), slice(None, -2), slice(1, -1)
    out[tuple(mid)] = (f[tuple(hi)] - f[tuple(lo)]) / (2.0 * h)
    # one-sided stencil at the edges is never needed: functions vanish there
    first, last = list(sl), list(sl)
    first[axis], last[axis] = 0, -1
    nxt, prv = list(sl), list(sl)
    nxt[axis], prv[axis] = 1, -2
    out[tuple(first)] = f[tuple(nxt)] / (2.0 * h)
    out[tuple(last)] = -f[tuple(prv)] / (2.0 * h)
    return out


def _laplacian(f: np.ndarray, h: float) -> np.ndarray:
    g = np.pad(f, ((0, 0), (1, 1), (1, 1)))
    return (g[:, 2:, 1:-1] + g[:, :-2, 1:-1] + g[:, 1:-1, 2:] + g[:, 1:-1, :-2] - 4.0 * f) / (h * h)


class PlaneOperators:
    """H, J_z, A_x, A_y acting on arrays of shape (dim, n, n)."""

    def __init__(self, rep: SpinRep, grid: PlaneGrid, field: np.ndarray):
        self.rep, self.grid = rep, grid
        x, y = grid.mesh()
        self.x, self.y = x, y
        self.r = np.hypot(x, y)
        self.field = field  # (n, n, dim, dim)
        self.sz = np.real(np.diag(rep.sz))

    def _mu(self, f: np.ndarray, weight: np.ndarray) -> np.ndarray:
        return np.einsum("ijab,bij->aij", self.field, f) * weight

    def px(self, f):
        return -1j * _dx(f, self.grid.h, 1)

    def py(self, f):
        return -1j * _dx(f, self.grid.h, 2)

    def H(self, f):
        return -_laplacian(f, self.grid.h) + self._mu(f, 1.0 / self.r)

    def Jz(self, f):
        return self.x * self.py(f) - self.y * self.px(f) + self.sz[:, None, None] * f

    def Ax(self, f):
        return 0.5 * (self.Jz(self.px(f)) + self.px(self.Jz(f))) + self._mu(f, -MASS * self.y / self.r)

    def Ay(self, f):
        return 0.5 * (self.Jz(self.py(f)) + self.py(self.Jz(f))) + self._mu(f, MASS * self.x / self.r)


def probe_functions(rep: SpinRep, grid: PlaneGrid, count: int = 6, seed: int = 7) -> list[np.ndarray]:
    """Smooth (dim)-component functions r^6 * Gaussian * low-order polynomial.

    The r^6 factor makes every operator image smooth at the origin.
    """
    rng = np.random.default_rng(seed)
    x, y = grid.mesh()
    r2 = x * x + y * y
    polys: list[Callable] = [
        lambda x, y: np.ones_like(x),
        lambda x, y: x,
        lambda x, y: y,
        lambda x, y: x * y,
        lambda x, y: x * x - y * y,
        lambda x, y: 1.0 + 0.5 * x - 0.3 * y * y,
    ]
    width = grid.extent / 20.0
    out = []
    for k in range(count):
        cx, cy = rng.uniform(-0.05, 0.05, size=2) * grid.extent
        env = (r2 / width**2) ** 3 * np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / (2.0 * width**2))
        spinor = rng.standard_normal(rep.dim) + 1j * rng.standard_normal(rep.dim)
        scalar = env * polys[k % len(polys)](x / width, y / width)
        out.append(spinor[:, None, None] * scalar[None])
    return out


def check_support(f: np.ndarray, tol: float = BOUNDARY_TOL) -> None:
    edge = max(
        np.abs(f[:, 0, :]).max(), np.abs(f[:, -1, :]).max(), np.abs(f[:, :, 0]).max(), np.abs(f[:, :, -1]).max()
    )
    if edge > tol * np.abs(f).max():
        raise ValueError(f"test function touches the boundary (relative edge amplitude {edge / np.abs(f).max():.2e})")


def _ratio(diff, *terms) -> float:
    scale = sum(np.linalg.norm(t) for t in terms)
    return float(np.linalg.norm(diff) / scale) if scale else 0.0


def random_hermitian_field(rep: SpinRep, grid: PlaneGrid, seed: int = 11) -> np.ndarray:
    """A constant random Hermitian matrix at every point: not rotation covariant."""
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((rep.dim, rep.dim)) + 1j * rng.standard_normal((rep.dim, rep.dim))
    m = 0.5 * (a + a.conj().T)
    return np.broadcast_to(m, (grid.n, grid.n, rep.dim, rep.dim))


def symmetry_residuals(s, params, grid: PlaneGrid, *, control: bool = False, count: int = 6) -> dict[str, float]:
    """Relative residuals of [H, J_z], [H, A_x], [H, A_y] and of [A_x, A_y] + 2 m i J_z H.

    Each entry is the largest over the test bundle of ||commutator f|| divided by
    the summed norms of the terms it is built from. ``control=True`` swaps the
    interaction for a random Hermitian matrix field.
    """
    s = HalfInt.coerce(s)
    rep = spin_matrices(s)
    if not isinstance(params, CouplingSet):
        params = CouplingSet.uniform(s, float(params))
    if control:
        field = random_hermitian_field(rep, grid)
    else:
        x, y = grid.mesh()
        r = np.hypot(x, y)
        field = mu_hat_field(rep, x / r, y / r, params)
    ops = PlaneOperators(rep, grid, field)
    worst = {"Jz": 0.0, "Ax": 0.0, "Ay": 0.0, "o12": 0.0}
    for f in probe_functions(rep, grid, count):
        check_support(f)
        hf = ops.H(f)
        for name in ("Jz", "Ax", "Ay"):
            op = getattr(ops, name)
            a, b = ops.H(op(f)), op(hf)
            worst[name] = max(worst[name], _ratio(a - b, a, b))
        xy, yx = ops.Ax(ops.Ay(f)), ops.Ay(ops.Ax(f))
        jh = ops.Jz(hf)
        worst["o12"] = max(worst["o12"], _ratio(xy - yx + 2j * MASS * jh, xy, yx, jh))
    return worst
