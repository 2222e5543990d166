"""Spin matrices, spectral projectors and o(1,2)-compatible interaction matrices.

All matrices are dense ``complex128`` numpy arrays in the standard basis
``|s>, |s-1>, ..., |-s>`` (diagonal S_z, real symmetric S_x, Condon-Shortley
phase).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping

import numpy as np
from scipy.linalg import expm

from .halfint import HalfInt, ladder

DEFAULT_MAX_SPIN = HalfInt(9)


class SpinConditioningWarning(UserWarning):
    """Raised when projector products are formed above the supported spin bound."""


@dataclass(frozen=True)
class UnitDirection:
    """A direction ``n = (nx, ny)`` in the plane."""

    nx: float
    ny: float

    def __post_init__(self):
        norm2 = self.nx * self.nx + self.ny * self.ny
        if abs(norm2 - 1.0) > 1e-14:
            raise ValueError(f"({self.nx}, {self.ny}) is not a unit vector (|n|^2 = {norm2!r})")

    @classmethod
    def from_angle(cls, phi: float) -> "UnitDirection":
        c, s = math.cos(phi), math.sin(phi)
        # renormalise so the invariant holds to rounding
        r = math.hypot(c, s)
        return cls(c / r, s / r)

    @classmethod
    def from_vector(cls, x: float, y: float) -> "UnitDirection":
        r = math.hypot(x, y)
        if r == 0.0:
            raise ValueError("direction of the zero vector is undefined")
        return cls(x / r, y / r)

    def rotated(self, theta: float) -> "UnitDirection":
        c, s = math.cos(theta), math.sin(theta)
        return UnitDirection.from_vector(c * self.nx - s * self.ny, s * self.nx + c * self.ny)


X_AXIS = UnitDirection(1.0, 0.0)


@dataclass(frozen=True)
class SpinRep:
    s: HalfInt
    sx: np.ndarray = field(repr=False)
    sy: np.ndarray = field(repr=False)
    sz: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.s.twice + 1

    @property
    def m_values(self) -> list[HalfInt]:
        """Diagonal of S_z in storage order."""
        return ladder(self.s)

    def dot(self, n: UnitDirection) -> np.ndarray:
        """S.n = S_x n_x + S_y n_y."""
        return self.sx * n.nx + self.sy * n.ny

    def cross(self, n: UnitDirection) -> np.ndarray:
        """S x n = S_x n_y - S_y n_x."""
        return self.sx * n.ny - self.sy * n.nx

    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)

    def rotation(self, theta: float) -> np.ndarray:
        """exp(-i theta S_z), diagonal."""
        m = np.real(np.diag(self.sz))
        return np.diag(np.exp(-1j * theta * m))


@dataclass(frozen=True)
class CouplingSet:
    """Couplings lambda_nu for nu = s, s-1, ... >= 0."""

    s: HalfInt
    lambdas: Mapping[HalfInt, float]

    def __post_init__(self):
        want = set(nonneg_labels(self.s))
        got = set(self.lambdas)
        if got != want:
            raise ValueError(
                f"spin {self.s} needs couplings for nu in {sorted(str(v) for v in want)}, "
                f"got {sorted(str(v) for v in got)}"
            )

    @classmethod
    def uniform(cls, s, value: float) -> "CouplingSet":
        s = HalfInt.coerce(s)
        return cls(s, {nu: float(value) for nu in nonneg_labels(s)})

    def __getitem__(self, nu) -> float:
        return self.lambdas[HalfInt.coerce(nu)]

    def items(self):
        return sorted(self.lambdas.items(), reverse=True)


def nonneg_labels(s: HalfInt) -> list[HalfInt]:
    """nu = s, s-1, ..., down to 0 or 1/2."""
    return [nu for nu in ladder(s) if nu.twice >= 0]


def spin_matrices(s, max_spin: HalfInt = DEFAULT_MAX_SPIN) -> SpinRep:
    """Angular-momentum matrices of dimension 2s+1 built from S_+."""
    if isinstance(s, float) and not (2 * s).is_integer():
        raise ValueError(f"spin {s!r} is not a half-integer")
    s = HalfInt.coerce(s)
    if s.twice <= 0:
        raise ValueError(f"spin must be positive, got {s}")
    if s > HalfInt.coerce(max_spin):
        warnings.warn(
            f"spin {s} exceeds the supported bound {max_spin}; projector products may lose accuracy",
            SpinConditioningWarning,
            stacklevel=2,
        )
    sv = float(s)
    m = np.array([float(v) for v in ladder(s)])
    splus = np.zeros((len(m), len(m)), dtype=complex)
    for i in range(1, len(m)):
        splus[i - 1, i] = math.sqrt(sv * (sv + 1) - m[i] * (m[i] + 1))
    sminus = splus.conj().T
    sx = 0.5 * (splus + sminus)
    sy = -0.5j * (splus - sminus)
    sz = np.diag(m).astype(complex)
    return SpinRep(s, sx, sy, sz)


@lru_cache(maxsize=None)
def _extended_spin(s: HalfInt) -> tuple[np.ndarray, np.ndarray]:
    """S_x and S_y in extended precision (same basis and phases as spin_matrices)."""
    sv = np.longdouble(s.twice) / 2
    m = np.array([np.longdouble(v.twice) / 2 for v in ladder(s)], dtype=np.longdouble)
    splus = np.zeros((len(m), len(m)), dtype=np.clongdouble)
    for i in range(1, len(m)):
        splus[i - 1, i] = np.sqrt(sv * (sv + 1) - m[i] * (m[i] + 1))
    sminus = splus.conj().T
    half_ = np.longdouble(1) / 2
    return half_ * (splus + sminus), -1j * half_ * (splus - sminus)


def projector(rep: SpinRep, n: UnitDirection, nu) -> np.ndarray:
    """Lagrange-product projector onto the eigenspace S.n = nu."""
    nu = HalfInt.coerce(nu)
    spectrum = rep.m_values
    if nu not in spectrum:
        raise ValueError(f"{nu} is not an eigenvalue of S.n for spin {rep.s}")
    # the product loses ~s digits in double precision; carry it in extended precision
    sx, sy = _extended_spin(rep.s)
    sn = sx * np.longdouble(n.nx) + sy * np.longdouble(n.ny)
    eye = np.eye(rep.dim, dtype=np.clongdouble)
    out = eye.copy()
    v = np.longdouble(nu.twice) / 2
    for other in spectrum:
        if other != nu:
            w = np.longdouble(other.twice) / 2
            out = out @ ((sn - w * eye) / (v - w))
    return out.astype(complex)


def projectors(rep: SpinRep, n: UnitDirection) -> dict[HalfInt, np.ndarray]:
    return {nu: projector(rep, n, nu) for nu in rep.m_values}


def _projector_or_zero(rep, n, nu):
    if abs(nu) > rep.s:
        return np.zeros((rep.dim, rep.dim), dtype=complex)
    return projector(rep, n, nu)


def _mu_raw(rep: SpinRep, n: UnitDirection) -> np.ndarray:
    return sum((-1) ** nu.floor() * projector(rep, n, nu) for nu in rep.m_values)


def canonical_sign(rep: SpinRep) -> int:
    """Sign making mu(1, 0) antidiagonal with positive entries; equals (-1)^floor(s)."""
    corner = _mu_raw(rep, X_AXIS)[0, -1].real
    return 1 if corner > 0 else -1


def mu_base(rep: SpinRep, n: UnitDirection, lam: float = 1.0, *, canonical: bool = True) -> np.ndarray:
    """lam * sum_nu (-1)^floor(nu) Lambda_nu, optionally sign-canonicalised."""
    out = lam * _mu_raw(rep, n)
    if canonical:
        out = canonical_sign(rep) * out
    return out


def lambda_coefficients(rep: SpinRep, n: UnitDirection, mu: np.ndarray) -> dict[HalfInt, float]:
    """Coefficients c_nu of ``mu`` in the rank-one projector basis."""
    return {nu: np.trace(projector(rep, n, nu) @ mu).real for nu in rep.m_values}


def b_tilde(rep: SpinRep, nu) -> np.ndarray:
    """Projector onto S_z^2 = nu^2 (polynomial in S_z^2)."""
    nu = HalfInt.coerce(nu)
    labels = nonneg_labels(rep.s)
    if nu not in labels:
        raise ValueError(f"{nu} is not a non-negative label for spin {rep.s}")
    z2 = np.real(np.diag(rep.sz)) ** 2
    diag = np.ones_like(z2)
    v = float(nu)
    for other in labels:
        if other != nu:
            w = float(other)
            diag *= (z2 - w * w) / (v * v - w * w)
    return np.diag(diag).astype(complex)


def c_tilde(rep: SpinRep, nu) -> np.ndarray:
    """S_z / nu times b_tilde(nu); the zero matrix for nu = 0, where S_z B_0 vanishes."""
    nu = HalfInt.coerce(nu)
    b = b_tilde(rep, nu)
    if nu.twice == 0:
        return np.zeros_like(b)
    return rep.sz @ b / float(nu)


def _check_params(rep: SpinRep, b: Mapping, d: Mapping):
    b = {HalfInt.coerce(k): float(v) for k, v in b.items()}
    d = {HalfInt.coerce(k): float(v) for k, v in d.items()}
    for nu in nonneg_labels(rep.s):
        if nu not in b:
            raise KeyError(f"missing b[{nu}]")
        if nu.twice > 0 and nu not in d:
            raise KeyError(f"missing d[{nu}]")
    return b, d


def mu_extended(rep: SpinRep, n: UnitDirection, b: Mapping, d: Mapping) -> np.ndarray:
    """sum_{nu>=0} (b_nu B_nu + i d_nu C_nu) mu_s(n), the (2s+1)-parameter family."""
    b, d = _check_params(rep, b, d)
    base = mu_base(rep, n)
    acc = np.zeros_like(base)
    for nu in nonneg_labels(rep.s):
        acc += b[nu] * b_tilde(rep, nu) + 1j * d.get(nu, 0.0) * c_tilde(rep, nu)
    return acc @ base


def mu_hat(rep: SpinRep, n: UnitDirection, couplings: CouplingSet, *, sign_flip: bool = False) -> np.ndarray:
    """sum_nu lambda_nu B_nu mu_s(n): the reduced (s+1 or s+1/2)-parameter family."""
    base = mu_base(rep, n)
    if sign_flip:
        base = -base
    acc = sum(lam * b_tilde(rep, nu) for nu, lam in couplings.items())
    return acc @ base


def mu_hat_field(rep: SpinRep, nx, ny, couplings: CouplingSet, *, sign_flip: bool = False) -> np.ndarray:
    """mu_hat at many directions at once; ``nx``, ``ny`` broadcast, output shape (..., dim, dim).

    Same Lagrange products as :func:`mu_hat`, batched with matmul.
    """
    nx, ny = np.broadcast_arrays(np.asarray(nx, dtype=float), np.asarray(ny, dtype=float))
    if np.abs(nx * nx + ny * ny - 1.0).max(initial=0.0) > 1e-12:
        raise ValueError("directions must be unit vectors")
    eye = rep.identity()
    sn = nx[..., None, None] * rep.sx + ny[..., None, None] * rep.sy
    spectrum = [float(v) for v in rep.m_values]
    raw = np.zeros(sn.shape, dtype=complex)
    for nu_h, nu in zip(rep.m_values, spectrum):
        proj = np.broadcast_to(eye, sn.shape).copy()
        for other in spectrum:
            if other != nu:
                proj = proj @ ((sn - other * eye) / (nu - other))
        raw += (-1) ** nu_h.floor() * proj
    base = canonical_sign(rep) * raw
    if sign_flip:
        base = -base
    acc = sum(lam * b_tilde(rep, nu) for nu, lam in couplings.items())
    return acc @ base


def unitary_reduce(rep: SpinRep, b: Mapping, d: Mapping) -> tuple[CouplingSet, np.ndarray]:
    """Remove the d-parameters by a constant unitary built from B_nu, C_nu.

    Returns the couplings lambda_nu = hypot(b_nu, d_nu) and ``U`` with
    ``U mu_extended U^+ == mu_hat``. The nu = 0 channel has no C-partner, so
    lambda_0 = b_0 keeps its sign.
    """
    b, d = _check_params(rep, b, d)
    u = np.zeros((rep.dim, rep.dim), dtype=complex)
    lambdas = {}
    for nu in nonneg_labels(rep.s):
        if nu.twice == 0:
            lambdas[nu] = b[nu]
            u += b_tilde(rep, nu)
            continue
        lam = math.hypot(b[nu], d[nu])
        theta = math.atan2(d[nu], b[nu]) if lam > 0 else 0.0
        lambdas[nu] = lam
        u += math.cos(theta / 2) * b_tilde(rep, nu) - 1j * math.sin(theta / 2) * c_tilde(rep, nu)
    return CouplingSet(rep.s, lambdas), u


def closed_form_spin1(rep: SpinRep, n: UnitDirection, mu: float, lam: float) -> np.ndarray:
    """mu (2 (S x n)^2 - 1) + lam (2 (S.n)^2 - 1)."""
    sxn, sdn, eye = rep.cross(n), rep.dot(n), rep.identity()
    return mu * (2 * sxn @ sxn - eye) + lam * (2 * sdn @ sdn - eye)


def closed_form_spin32(rep: SpinRep, n: UnitDirection, mu: float, nu: float) -> np.ndarray:
    """(nu + mu S_z^2)(7 S x n - 4 (S x n)^3)."""
    x = rep.cross(n)
    return (nu * rep.identity() + mu * rep.sz @ rep.sz) @ (7 * x - 4 * x @ x @ x)


def quarter_turn(rep: SpinRep) -> np.ndarray:
    """exp(i pi S_z / 2)."""
    return expm(0.5j * math.pi * rep.sz)


def closed_form_check(rep: SpinRep, n: UnitDirection, params: Mapping) -> float:
    """Max-norm residual between a closed form and the projector construction.

    ``params`` holds the per-channel couplings ``{nu: lambda_nu}``. For spin 1
    the closed form uses mu = (l0 - l1)/2, lam = (l0 + l1)/2 and also checks
    that exp(i pi S_z/2) maps the lam-only form onto the mu-only form. For
    spin 3/2 it uses mu = (l32 - l12)/6, nu = 3 l12/8 - l32/24 and compares
    against U^+ mu_hat U.
    """
    couplings = CouplingSet(rep.s, {HalfInt.coerce(k): float(v) for k, v in params.items()})
    target = mu_hat(rep, n, couplings)
    if rep.s == HalfInt(2):
        l0, l1 = couplings[0], couplings[1]
        closed = closed_form_spin1(rep, n, 0.5 * (l0 - l1), 0.5 * (l0 + l1))
        res = np.abs(closed - target).max()
        u = quarter_turn(rep)
        w = 1.0 + abs(l0) + abs(l1)
        lam_only = closed_form_spin1(rep, n, 0.0, w)
        mu_only = closed_form_spin1(rep, n, w, 0.0)
        res = max(res, np.abs(u @ lam_only @ u.conj().T - mu_only).max() / w)
        return float(res)
    if rep.s == HalfInt(3):
        l12, l32 = couplings[HalfInt(1)], couplings[HalfInt(3)]
        closed = closed_form_spin32(rep, n, (l32 - l12) / 6, 3 * l12 / 8 - l32 / 24)
        u = quarter_turn(rep)
        return float(np.abs(closed - u.conj().T @ target @ u).max())
    raise ValueError(f"closed forms exist only for spin 1 and 3/2, got {rep.s}")


def pauli_cubic_form(rep: SpinRep, n: UnitDirection, omega: float) -> np.ndarray:
    """omega (S.h - 4/7 (S.h)^3) with the unit field h = S x n direction (spin 3/2)."""
    x = rep.cross(n)
    return omega * (x - 4.0 / 7.0 * x @ x @ x)


def nik1_identity_residual(rep: SpinRep, n: UnitDirection, nu) -> float:
    """Residual of the commutator identity for [Lambda_nu, S_z].

    [L_nu, S_z] = -1/2 S_z (2 L_nu - L_{nu+1} - L_{nu-1})
                  + i/2 (n_x S_y - n_y S_x)(L_{nu+1} - L_{nu-1}),
    with projectors outside the spectrum taken as zero.
    """
    nu = HalfInt.coerce(nu)
    lam = projector(rep, n, nu)
    up = _projector_or_zero(rep, n, nu + 1)
    down = _projector_or_zero(rep, n, nu - 1)
    sz = rep.sz
    lhs = lam @ sz - sz @ lam
    rhs = -0.5 * sz @ (2 * lam - up - down) + 0.5j * (n.nx * rep.sy - n.ny * rep.sx) @ (up - down)
    return float(np.abs(lhs - rhs).max())


def anticommutator_residual(rep: SpinRep, mu: np.ndarray) -> float:
    return float(np.abs(rep.sz @ mu + mu @ rep.sz).max())


def hermiticity_residual(mu: np.ndarray) -> float:
    return float(np.abs(mu - mu.conj().T).max())


def rotation_covariance_residual(
    mu_builder: Callable[[UnitDirection], np.ndarray],
    rep: SpinRep,
    theta: float,
    n: UnitDirection = X_AXIS,
) -> float:
    """|| mu(R(theta) n) - e^{-i theta S_z} mu(n) e^{i theta S_z} ||_max."""
    r = rep.rotation(theta)
    lhs = mu_builder(n.rotated(theta))
    rhs = r @ mu_builder(n) @ r.conj().T
    return float(np.abs(lhs - rhs).max())


def radial_coupling_matrix(rep: SpinRep, couplings: CouplingSet, *, sign_flip: bool = False) -> np.ndarray:
    """Interaction matrix entering the radial equation, real and antidiagonal.

    This is mu_hat at n = (1, 0) with the unpaired nu = 0 channel (integer
    spin) taken attractive, i.e. its coupling enters as -lambda_0.
    """
    signed = dict(couplings.lambdas)
    zero = HalfInt(0)
    if zero in signed:
        signed[zero] = -signed[zero]
    m = mu_hat(rep, X_AXIS, CouplingSet(rep.s, signed), sign_flip=sign_flip)
    anti = np.fliplr(np.eye(rep.dim, dtype=bool))
    # off-antidiagonal entries are rounding noise from the projector products
    return np.where(anti, m.real, 0.0)


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "dim": int(m.shape[0]),
        "entries": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }


def matrix_from_json(obj: Mapping) -> np.ndarray:
    dim = int(obj["dim"])
    flat = np.array([complex(re, im) for re, im in obj["entries"]])
    if flat.size != dim * dim:
        raise ValueError(f"expected {dim * dim} entries, got {flat.size}")
    return flat.reshape(dim, dim)
