"""Radial reduction of the planar Hamiltonian into decoupled (kappa, nu) blocks.

Radial components are ordered like S_z = diag(s, ..., -s). Block (kappa, nu)
collects (phi_nu, phi_-nu) and obeys

    V_{kappa,nu}(r) = ((kappa - nu sigma_3)^2 - 1/4) / r^2 + lambda sigma_1 / r,

and for integer spin the unpaired phi_0 obeys the attractive scalar problem
(kappa^2 - 1/4)/r^2 - lambda/r. All energies and couplings are in reduced
units (2m = 1).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .halfint import HalfInt
from .spinalg import CouplingSet, nonneg_labels, radial_coupling_matrix, spin_matrices
from .states import BesselState

SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]])


@dataclass(frozen=True)
class ReducedCoupling:
    lambda_t: float

    def __post_init__(self):
        if not self.lambda_t > 0:
            raise ValueError(f"reduced coupling must be positive for bound states, got {self.lambda_t}")


@dataclass(frozen=True)
class RadialBlock:
    kappa: HalfInt
    nu: HalfInt
    lambda_t: float

    def __post_init__(self):
        object.__setattr__(self, "kappa", HalfInt.coerce(self.kappa))
        object.__setattr__(self, "nu", HalfInt.coerce(self.nu))
        ReducedCoupling(self.lambda_t)
        if self.kappa.twice < 0 or self.nu.twice < 0:
            raise ValueError(f"block labels must be non-negative, got ({self.kappa}, {self.nu})")
        if self.kappa.is_integer != self.nu.is_integer:
            raise ValueError(f"kappa={self.kappa} and nu={self.nu} must share parity")

    @property
    def size(self) -> int:
        return 1 if self.nu.twice == 0 else 2

    @property
    def label(self) -> str:
        return f"({self.kappa},{self.nu})"

    def laurent(self) -> dict[int, np.ndarray]:
        """Potential as {power of r: matrix}."""
        return potential_laurent(float(self.kappa), float(self.nu), self.lambda_t)

    def potential(self, r: float) -> np.ndarray:
        return potential_at(self, r)

    def to_json(self) -> dict:
        return {
            "kappa": self.kappa.to_json(),
            "nu": self.nu.to_json(),
            "lambda_t": self.lambda_t,
            "size": self.size,
        }


@dataclass(frozen=True)
class MatrixPotential:
    block: RadialBlock

    def __call__(self, r: float) -> np.ndarray:
        return potential_at(self.block, r)


def potential_laurent(kappa: float, nu: float, lambda_t: float) -> dict[int, np.ndarray]:
    """Coefficients of r^-2 and r^-1; ``kappa`` may be negative (parity partner)."""
    if nu == 0.0:
        return {-2: np.array([[kappa * kappa - 0.25]]), -1: np.array([[-lambda_t]])}
    diag = np.array([(kappa - nu) ** 2 - 0.25, (kappa + nu) ** 2 - 0.25])
    return {-2: np.diag(diag), -1: lambda_t * SIGMA1}


def _evaluate_laurent(laurent, r: float) -> np.ndarray:
    return sum(m * r**k for k, m in laurent.items())


def potential_at(block: RadialBlock, r: float) -> np.ndarray:
    if not r > 0:
        raise ValueError(f"potential needs r > 0, got {r}")
    return _evaluate_laurent(block.laurent(), r)


def check_kappa(s: HalfInt, kappa: HalfInt, *, allow_negative: bool = False) -> None:
    if kappa.is_integer != s.is_integer:
        raise ValueError(f"kappa={kappa} must be {'integer' if s.is_integer else 'half-integer'} for spin {s}")
    if kappa.twice < 0 and not allow_negative:
        raise ValueError(f"kappa must be non-negative, got {kappa}")


def _as_couplings(s: HalfInt, couplings) -> CouplingSet:
    if isinstance(couplings, CouplingSet):
        if couplings.s != s:
            raise ValueError(f"couplings are for spin {couplings.s}, not {s}")
        return couplings
    return CouplingSet.uniform(s, float(couplings))


def reduce(s, kappa, couplings) -> list[RadialBlock]:
    """Blocks (kappa, nu) for nu = s, s-1, ... >= 0 with lambda_nu attached."""
    s = HalfInt.coerce(s)
    kappa = HalfInt.coerce(kappa)
    check_kappa(s, kappa)
    cs = _as_couplings(s, couplings)
    return [RadialBlock(kappa, nu, cs[nu]) for nu in nonneg_labels(s)]


def component_pairs(s: HalfInt) -> list[tuple[int, ...]]:
    """Storage indices of (phi_nu, phi_-nu) per block, or (phi_0,) for nu = 0."""
    dim = s.twice + 1
    out = []
    for nu in nonneg_labels(s):
        i = (s - nu).twice // 2
        j = dim - 1 - i
        out.append((i,) if i == j else (i, j))
    return out


def full_potential(s, kappa, couplings, r: float, *, sign_flip: bool = False) -> np.ndarray:
    """((kappa - S_z)^2 - 1/4)/r^2 + M/r with M the radial interaction matrix."""
    s = HalfInt.coerce(s)
    kappa = HalfInt.coerce(kappa)
    check_kappa(s, kappa, allow_negative=True)
    if not r > 0:
        raise ValueError(f"potential needs r > 0, got {r}")
    rep = spin_matrices(s)
    cs = _as_couplings(s, couplings)
    m = np.real(np.diag(rep.sz))
    centrifugal = np.diag((float(kappa) - m) ** 2 - 0.25)
    return centrifugal / r**2 + radial_coupling_matrix(rep, cs, sign_flip=sign_flip) / r


def full_laurent(s, kappa, couplings, *, sign_flip: bool = False) -> dict[int, np.ndarray]:
    s = HalfInt.coerce(s)
    kappa = HalfInt.coerce(kappa)
    check_kappa(s, kappa, allow_negative=True)
    rep = spin_matrices(s)
    cs = _as_couplings(s, couplings)
    m = np.real(np.diag(rep.sz))
    return {
        -2: np.diag((float(kappa) - m) ** 2 - 0.25),
        -1: radial_coupling_matrix(rep, cs, sign_flip=sign_flip),
    }


def assemble_blocks(s, blocks: list[RadialBlock], r: float) -> np.ndarray:
    """Direct sum of block potentials placed back at their component indices."""
    s = HalfInt.coerce(s)
    dim = s.twice + 1
    out = np.zeros((dim, dim))
    for block, idx in zip(blocks, component_pairs(s)):
        v = potential_at(block, r)
        for a, ia in enumerate(idx):
            for b, ib in enumerate(idx):
                out[ia, ib] = v[a, b]
    return out


def block_match_residual(s, kappa, couplings, r_values, *, sign_flip: bool = False) -> float:
    """max over ``r_values`` of |full_potential - assemble_blocks| / max |full_potential|."""
    s = HalfInt.coerce(s)
    blocks = reduce(s, kappa, couplings)
    worst = 0.0
    for r in np.atleast_1d(r_values):
        full = full_potential(s, kappa, couplings, float(r), sign_flip=sign_flip)
        diff = np.abs(full - assemble_blocks(s, blocks, float(r))).max()
        worst = max(worst, float(diff / np.abs(full).max()))
    return worst


def parity_partner(block: RadialBlock, state: BesselState) -> BesselState:
    """kappa -> -kappa solution: swap (phi_nu, phi_-nu); the scalar channel is unchanged."""
    if state.size != block.size:
        raise ValueError("state does not match block size")
    if block.size == 1:
        return BesselState(state.beta, [dict(c) for c in state.components], state.norm)
    return state.permuted([1, 0])


def parity_block_laurent(block: RadialBlock) -> dict[int, np.ndarray]:
    """Potential of the reflected problem, i.e. the block with kappa -> -kappa."""
    return potential_laurent(-float(block.kappa), float(block.nu), block.lambda_t)


def reduction_to_json(s, kappa, blocks: list[RadialBlock]) -> dict:
    s = HalfInt.coerce(s)
    kappa = HalfInt.coerce(kappa)
    return {
        "spin": s.to_json(),
        "kappa": kappa.to_json(),
        "blocks": [b.to_json() for b in blocks],
    }
