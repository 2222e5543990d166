"""Matrix superpotentials, shape invariance and ladder-built eigenstates.

For a radial block with potential V and superpotential W,

    V = W^2 - W' + c_j,          W^2 + W' = V_{j+1} - c_j,

with c_j = -(lambda / (2j + 1))^2. Hence H_j = a^+ a + c_j and
a a^+ + c_j = H_{j+1}, so a^+ maps eigenstates of H_{j+1} to eigenstates of
H_j with the same energy. The chain parameter j is kappa for the primary and
scalar branches and nu for the dual branch.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .halfint import HalfInt
from .radial import SIGMA1, SIGMA3, RadialBlock, potential_laurent
from .states import BesselState, coefficient_residual


class Branch(enum.Enum):
    PRIMARY = "primary"
    DUAL = "dual"
    SCALAR = "scalar"


class InadmissibleBlock(ValueError):
    """No square-integrable ground state that vanishes at r = 0."""


def factorization_constant(j, lambda_t: float) -> float:
    j = float(HalfInt.coerce(j))
    return -((lambda_t / (2.0 * j + 1.0)) ** 2)


@dataclass(frozen=True)
class Superpotential:
    """W(r) = w_inv / r + w_const, as 1x1 or 2x2 real matrices."""

    branch: Branch
    j: HalfInt
    other: HalfInt
    lambda_t: float

    @property
    def size(self) -> int:
        return 1 if self.branch is Branch.SCALAR else 2

    @property
    def c(self) -> float:
        return factorization_constant(self.j, self.lambda_t)

    @property
    def w_inv(self) -> np.ndarray:
        j, o = float(self.j), float(self.other)
        if self.branch is Branch.SCALAR:
            return np.array([[-(j + 0.5)]])
        return o * SIGMA3 - (j + 0.5) * np.eye(2)

    @property
    def w_const(self) -> np.ndarray:
        a = self.lambda_t / (2.0 * float(self.j) + 1.0)
        if self.branch is Branch.SCALAR:
            return np.array([[a]])
        return -a * SIGMA1

    def __call__(self, r: float) -> np.ndarray:
        return self.w_inv / r + self.w_const

    def derivative(self, r: float) -> np.ndarray:
        return -self.w_inv / r**2

    def block(self) -> RadialBlock:
        """The block whose potential this W factorises."""
        if self.branch is Branch.DUAL:
            return RadialBlock(self.other, self.j, self.lambda_t)
        return RadialBlock(self.j, self.other, self.lambda_t)

    def shifted(self) -> "Superpotential":
        return Superpotential(self.branch, self.j + 1, self.other, self.lambda_t)

    def partner_block(self) -> RadialBlock:
        """V_{j+1}: the block reached by one shape-invariance step."""
        return self.shifted().block()

    def creation(self, state: BesselState) -> BesselState:
        """a^+ psi = -psi' + W psi."""
        return -state.derivative() + state.multiply({-1: self.w_inv, 0: self.w_const})

    def annihilation(self, state: BesselState) -> BesselState:
        """a^- psi = psi' + W psi."""
        return state.derivative() + state.multiply({-1: self.w_inv, 0: self.w_const})

    def to_json(self) -> dict:
        return {
            "branch": self.branch.value,
            "j": self.j.to_json(),
            "other": self.other.to_json(),
            "lambda_t": self.lambda_t,
        }


def select_branch(block: RadialBlock) -> Superpotential:
    """Scalar for nu = 0, primary for kappa >= nu, dual for kappa < nu."""
    if block.nu.twice == 0:
        return Superpotential(Branch.SCALAR, block.kappa, HalfInt(0), block.lambda_t)
    if block.kappa >= block.nu:
        return Superpotential(Branch.PRIMARY, block.kappa, block.nu, block.lambda_t)
    return Superpotential(Branch.DUAL, block.nu, block.kappa, block.lambda_t)


def superpotentials(block: RadialBlock) -> list[Superpotential]:
    """Every factorisation of the block potential (both branches for 2x2 blocks)."""
    if block.size == 1:
        return [select_branch(block)]
    return [
        Superpotential(Branch.PRIMARY, block.kappa, block.nu, block.lambda_t),
        Superpotential(Branch.DUAL, block.nu, block.kappa, block.lambda_t),
    ]


def _laurent_at(laurent, r):
    return sum(m * r**k for k, m in laurent.items())


def factorization_residual(w: Superpotential, block: RadialBlock, r: float) -> float:
    """|| V(r) - (W^2 - W' + c_j) ||_max."""
    if not r > 0:
        raise ValueError(f"r must be positive, got {r}")
    v = _laurent_at(block.laurent(), r)
    wr = w(r)
    return float(np.abs(v - (wr @ wr - w.derivative(r) + w.c * np.eye(w.size))).max())


def shape_invariance_residual(w: Superpotential, block: RadialBlock, r: float) -> tuple[float, float]:
    """Check W^2 + W' = V_{j+1} + C with C = -c_j; returns (residual, C).

    ``block`` is the block W factorises; its partner is derived from ``w``.
    """
    if not r > 0:
        raise ValueError(f"r must be positive, got {r}")
    if w.block() != block:
        raise ValueError(f"superpotential {w} does not factorise block {block.label}")
    wr = w(r)
    lhs = wr @ wr + w.derivative(r)
    v_next = _laurent_at(w.partner_block().laurent(), r)
    c_shift = -w.c
    return float(np.abs(lhs - v_next - c_shift * np.eye(w.size)).max()), c_shift


BOUNDARY_RULE = (
    "the primary ground state needs kappa >= nu and the dual one kappa < nu; "
    "otherwise it does not vanish at r = 0"
)


def check_admissible(w: Superpotential) -> None:
    """Raise InadmissibleBlock if the ground state of ``w`` fails to vanish at r = 0."""
    if w.branch is Branch.PRIMARY and w.j < w.other:
        raise InadmissibleBlock(f"primary branch at (kappa, nu)=({w.j},{w.other}): {BOUNDARY_RULE}")
    if w.branch is Branch.DUAL and w.other >= w.j:
        raise InadmissibleBlock(f"dual branch at (kappa, nu)=({w.other},{w.j}): {BOUNDARY_RULE}")


def ground_state(block: RadialBlock, w: Superpotential | None = None) -> BesselState:
    """Solution of a^- psi = 0 for the selected branch, with unit integration constant.

    Primary (kappa >= nu):  r^{kappa+1} ( K_{nu+1/2}, -K_{nu-1/2} )(beta r)
    Dual    (kappa <  nu):  r^{nu+1}    ( K_{kappa+1/2}, -K_{kappa-1/2} )(beta r)
    Scalar  (nu = 0):       r^{kappa+1/2} exp(-beta r)
    """
    if w is None:
        w = select_branch(block)
    elif w.block() != block:
        raise ValueError(f"superpotential does not factorise block {block.label}")
    check_admissible(w)
    beta = block.lambda_t / (2.0 * float(w.j) + 1.0)
    if w.branch is Branch.SCALAR:
        # r^{k+1/2} e^{-x} = sqrt(2 beta / pi) r^{k+1} K_{1/2}(beta r)
        p = float(block.kappa) + 1.0
        return BesselState(beta, [{(p, 1): math.sqrt(2.0 * beta / math.pi)}])
    p = float(w.j) + 1.0
    qt = w.other.twice
    return BesselState(beta, [{(p, qt + 1): 1.0}, {(p, qt - 1): -1.0}])


def chain_top(block: RadialBlock, n: int) -> RadialBlock:
    w = select_branch(block)
    for _ in range(n):
        w = w.shifted()
    return w.block()


def _beta_consistent(state: BesselState, w: Superpotential) -> bool:
    # state must come from the ground state of some V_{J}, J >= j + 1, on this chain
    ratio = w.lambda_t / state.beta
    top = (ratio - 1.0) / 2.0
    steps = top - float(w.j)
    return steps > 0.5 and abs(steps - round(steps)) < 1e-9


def raise_state(state: BesselState, w: Superpotential) -> BesselState:
    """Apply a^+ = -d/dr + W; maps eigenstates of V_{j+1} to eigenstates of V_j."""
    if state.size != w.size:
        raise ValueError("state and superpotential sizes differ")
    if not state.is_zero() and not _beta_consistent(state, w):
        raise ValueError(
            f"beta={state.beta} is not lambda/(2J+1) for any J above j={w.j} on this chain"
        )
    return w.creation(state)


def energy(block: RadialBlock, n: int) -> float:
    w = select_branch(block)
    return factorization_constant(w.j + n, block.lambda_t)


def branch_superpotential(block: RadialBlock, branch: Branch | None = None) -> Superpotential:
    """The selected branch, or the requested one (which may be inadmissible)."""
    if branch is None:
        return select_branch(block)
    for w in superpotentials(block):
        if w.branch is branch:
            return w
    raise ValueError(f"block {block.label} has no {branch.value} branch")


def eigenstate(
    block: RadialBlock, n: int, *, normalize: bool = True, branch: Branch | None = None
) -> tuple[BesselState, float]:
    """n-th excited state a^+_j ... a^+_{j+n-1} psi_{j+n,0} and its energy c_{j+n}.

    Raises InadmissibleBlock if ``branch`` forces a ground state that does not
    vanish at r = 0.
    """
    if n < 0:
        raise ValueError("level index must be non-negative")
    w0 = branch_superpotential(block, branch)
    check_admissible(w0)
    chain = [w0]
    for _ in range(n):
        chain.append(chain[-1].shifted())
    psi = ground_state(chain[-1].block(), chain[-1])
    for w in reversed(chain[:-1]):
        psi = raise_state(psi, w)
    if normalize:
        from .oracle import normalize as _normalize

        psi = _normalize(psi)
    return psi, factorization_constant(chain[-1].j, block.lambda_t)


def hamiltonian_residual_state(block: RadialBlock, psi: BesselState, e: float) -> BesselState:
    """-psi'' + V psi - E psi, as an exact BesselState."""
    lap = psi.derivative().derivative()
    laurent = dict(block.laurent())
    laurent[0] = laurent.get(0, 0.0) - e * np.eye(block.size)
    return -lap + psi.multiply(laurent)


def laurent_residual_state(laurent, psi: BesselState, e: float) -> BesselState:
    lap = psi.derivative().derivative()
    size = psi.size
    lau = dict(laurent)
    lau[0] = lau.get(0, 0.0) - e * np.eye(size)
    return -lap + psi.multiply(lau)


def eigen_residual(block: RadialBlock, psi: BesselState, e: float, r) -> float:
    """max_r ||(-psi'' + V psi - E psi)(r)|| / max_r ||psi(r)|| over the sample ``r``."""
    res = hamiltonian_residual_state(block, psi, e).evaluate(r)
    val = psi.evaluate(r)
    return float(np.linalg.norm(res, axis=0).max() / np.linalg.norm(val, axis=0).max())


def annihilation_residual(block: RadialBlock) -> float:
    """Relative size of the canonical form of a^- psi_0 (zero means exact)."""
    psi = ground_state(block)
    return coefficient_residual(select_branch(block).annihilation(psi), psi)


def intertwining_residual(w: Superpotential, psi_next: BesselState, r) -> float:
    """|| H_j (a^+ psi) - a^+ (H_{j+1} psi) || sampled at ``r``, relative to the terms."""
    here = w.block().laurent()
    there = w.partner_block().laurent()
    up = w.creation(psi_next)
    lhs = laurent_residual_state(here, up, 0.0).evaluate(r)
    rhs = w.creation(laurent_residual_state(there, psi_next, 0.0)).evaluate(r)
    scale = np.abs(lhs).max() + np.abs(rhs).max()
    return float(np.abs(lhs - rhs).max() / scale) if scale else 0.0


def sample_radii(block: RadialBlock, n: int, count: int = 100) -> np.ndarray:
    """Log-spaced radii covering the core and the exponential tail of level n."""
    j = float(select_branch(block).j) + n
    scale = (2.0 * j + 1.0) / block.lambda_t
    return np.geomspace(1e-2 * scale, 30.0 * scale * (n + 1), count)
