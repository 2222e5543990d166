"""Seeded identity suite: matrix identities, radial reduction and SUSY algebra."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .halfint import HalfInt, half
from .radial import block_match_residual, reduce
from .spinalg import (
    CouplingSet,
    SpinRep,
    UnitDirection,
    anticommutator_residual,
    b_tilde,
    c_tilde,
    closed_form_check,
    hermiticity_residual,
    lambda_coefficients,
    mu_base,
    mu_extended,
    mu_hat,
    nik1_identity_residual,
    nonneg_labels,
    projector,
    rotation_covariance_residual,
    spin_matrices,
    unitary_reduce,
)
from .susy import annihilation_residual, factorization_residual, shape_invariance_residual, superpotentials

TOL = 1e-12
COMMUTATOR_TOL = 1e-13


@dataclass(frozen=True)
class IdentityResult:
    identity: str
    spin: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.residual < self.tol)

    def to_json(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


def _directions(rng: np.random.Generator, count: int) -> list[UnitDirection]:
    return [UnitDirection.from_angle(phi) for phi in rng.uniform(0.0, 2.0 * math.pi, count)]


def _couplings(rng: np.random.Generator, s: HalfInt) -> CouplingSet:
    return CouplingSet(s, {nu: float(rng.uniform(0.5, 2.0)) for nu in nonneg_labels(s)})


def spin_checks(rep: SpinRep) -> dict[str, float]:
    sx, sy, sz = rep.sx, rep.sy, rep.sz
    res = max(
        np.abs(sx @ sy - sy @ sx - 1j * sz).max(),
        np.abs(sy @ sz - sz @ sy - 1j * sx).max(),
        np.abs(sz @ sx - sx @ sz - 1j * sy).max(),
    )
    return {"spin_commutators": float(res)}


def projector_checks(rep: SpinRep, dirs) -> dict[str, float]:
    orth = compl = eig = nik = 0.0
    eye = rep.identity()
    for n in dirs:
        projs = {nu: projector(rep, n, nu) for nu in rep.m_values}
        sn = rep.dot(n)
        total = np.zeros_like(eye)
        for nu, p in projs.items():
            total += p
            eig = max(eig, np.abs(sn @ p - float(nu) * p).max())
            nik = max(nik, nik1_identity_residual(rep, n, nu))
            for mu, q in projs.items():
                target = p if mu == nu else 0.0
                orth = max(orth, np.abs(p @ q - target).max())
        compl = max(compl, np.abs(total - eye).max())
    return {
        "projector_orthogonality": float(orth),
        "projector_completeness": float(compl),
        "eigen_relation": float(eig),
        "nik1_commutator": float(nik),
    }


def interaction_checks(rep: SpinRep, dirs, rng: np.random.Generator) -> dict[str, float]:
    s = rep.s
    herm = anti = alt = rot = 0.0
    for n in dirs:
        cs = _couplings(rng, s)
        b = {nu: float(rng.uniform(-2, 2)) for nu in nonneg_labels(s)}
        d = {nu: float(rng.uniform(-2, 2)) for nu in nonneg_labels(s)}
        scale = max(abs(v) for v in list(b.values()) + list(d.values()) + list(cs.lambdas.values()))
        for mu in (mu_base(rep, n), mu_extended(rep, n, b, d) / scale, mu_hat(rep, n, cs) / scale):
            herm = max(herm, hermiticity_residual(mu))
            anti = max(anti, anticommutator_residual(rep, mu))
        c = lambda_coefficients(rep, n, mu_base(rep, n))
        labels = rep.m_values
        alt = max(alt, max(abs(c[labels[i]] + c[labels[i + 1]]) for i in range(len(labels) - 1)))
        theta = float(rng.uniform(-math.pi, math.pi))
        rot = max(rot, rotation_covariance_residual(lambda m: mu_hat(rep, m, cs), rep, theta, n) / scale)
    return {
        "hermiticity": float(herm),
        "anticommutation": float(anti),
        "alternating_coefficients": float(alt),
        "rotation_covariance": float(rot),
    }


def reduction_checks(rep: SpinRep, dirs, rng: np.random.Generator) -> dict[str, float]:
    s = rep.s
    labels = nonneg_labels(s)
    orth = 0.0
    for a in labels:
        for c in labels:
            target_b = b_tilde(rep, c) if a == c else 0.0
            orth = max(orth, np.abs(b_tilde(rep, a) @ b_tilde(rep, c) - target_b).max())
            if a.twice and c.twice:
                orth = max(orth, np.abs(c_tilde(rep, a) @ c_tilde(rep, c) - target_b).max())
    unit = red = lam = 0.0
    eye = rep.identity()
    for n in dirs:
        b = {nu: float(rng.uniform(-2, 2)) for nu in labels}
        d = {nu: float(rng.uniform(-2, 2)) if nu.twice else 0.0 for nu in labels}
        scale = max(abs(v) for v in list(b.values()) + list(d.values()))
        cs, u = unitary_reduce(rep, b, d)
        unit = max(unit, np.abs(u.conj().T @ u - eye).max())
        lhs = u @ mu_extended(rep, n, b, d) @ u.conj().T
        red = max(red, np.abs(lhs - mu_hat(rep, n, cs)).max() / scale)
        for nu in labels:
            want = b[nu] if nu.twice == 0 else math.hypot(b[nu], d[nu])
            lam = max(lam, abs(cs[nu] - want) / scale)
    return {
        "bc_orthogonality": float(orth),
        "unitary_reduction_unitarity": float(unit),
        "unitary_reduction": float(red),
        "unitary_reduction_couplings": float(lam),
    }


def closed_form_checks(rep: SpinRep, dirs, rng: np.random.Generator) -> dict[str, float]:
    if rep.s not in (HalfInt(2), HalfInt(3)):
        return {}
    worst = 0.0
    for n in dirs:
        params = {nu: float(rng.uniform(-2, 2)) for nu in nonneg_labels(rep.s)}
        scale = max(1.0, max(abs(v) for v in params.values()))
        worst = max(worst, closed_form_check(rep, n, params) / scale)
    return {"closed_form": float(worst)}


def radial_checks(s: HalfInt, rng: np.random.Generator, count: int, sign_flip: bool = False) -> dict[str, float]:
    """Block match, factorisation, shape invariance and annihilation for kappa = kmin .. kmin + 2."""
    k0 = HalfInt(s.twice % 2)
    radii = np.exp(rng.uniform(math.log(1e-2), math.log(1e2), count))
    match = fac = shape = ann = 0.0
    for dk in range(3):
        kappa = k0 + dk
        cs = _couplings(rng, s)
        scale = max(cs.lambdas.values())
        match = max(match, block_match_residual(s, kappa, cs, radii[:10], sign_flip=sign_flip) / scale)
        for block in reduce(s, kappa, cs):
            ann = max(ann, annihilation_residual(block))
            for w in superpotentials(block):
                for r in radii:
                    v_scale = 1.0 + float(np.abs(block.potential(r)).max())
                    fac = max(fac, factorization_residual(w, block, r) / v_scale)
                    shape = max(shape, shape_invariance_residual(w, block, r)[0] / v_scale)
    return {
        "block_match": float(match),
        "factorization": float(fac),
        "shape_invariance": float(shape),
        "annihilation": float(ann),
    }


def run_suite(
    max_spin="5/2", seed: int = 0, samples: int = 100, *, sign_flip: bool = False, radial: bool = True
) -> list[IdentityResult]:
    """Every identity for s = 1/2 .. max_spin, each over ``samples`` seeded draws."""
    top = HalfInt.coerce(max_spin)
    out: list[IdentityResult] = []
    for twice in range(1, top.twice + 1):
        s = half(twice)
        rng = np.random.default_rng([seed, twice])
        rep = spin_matrices(s)
        dirs = _directions(rng, samples)
        groups = [spin_checks(rep), projector_checks(rep, dirs), interaction_checks(rep, dirs, rng)]
        groups += [reduction_checks(rep, dirs, rng), closed_form_checks(rep, dirs, rng)]
        if sign_flip:
            # the hook flips the sign of mu at the canonicaliser; condi2 cannot see it
            flipped = [-mu_base(rep, n) for n in dirs[:10]]
            groups.append({"anticommutation_flipped": max(anticommutator_residual(rep, m) for m in flipped)})
        if radial:
            groups.append(radial_checks(s, rng, samples, sign_flip=sign_flip))
        for group in groups:
            for name, res in group.items():
                tol = COMMUTATOR_TOL if name == "spin_commutators" else TOL
                out.append(IdentityResult(name, str(s), float(res), tol))
    return out
