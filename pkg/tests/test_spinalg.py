import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from spinsusy.halfint import HalfInt, half
from spinsusy.spinalg import (
    X_AXIS,
    CouplingSet,
    SpinConditioningWarning,
    UnitDirection,
    anticommutator_residual,
    b_tilde,
    c_tilde,
    canonical_sign,
    closed_form_check,
    hermiticity_residual,
    lambda_coefficients,
    matrix_from_json,
    matrix_to_json,
    mu_base,
    mu_extended,
    mu_hat,
    mu_hat_field,
    nik1_identity_residual,
    nonneg_labels,
    projector,
    projectors,
    radial_coupling_matrix,
    rotation_covariance_residual,
    spin_matrices,
    unitary_reduce,
)

spins = st.integers(1, 9).map(half)
angles = st.floats(0.0, 2.0 * math.pi, allow_nan=False)


def eig_projector(rep, n, nu):
    # oracle: spectral projector from a Hermitian eigendecomposition
    w, v = np.linalg.eigh(rep.dot(n))
    sel = np.abs(w - float(nu)) < 1e-8
    return v[:, sel] @ v[:, sel].conj().T


def test_spin_half_is_pauli_over_two():
    rep = spin_matrices("1/2")
    assert np.allclose(rep.sx, [[0, 0.5], [0.5, 0]])
    assert np.allclose(rep.sy, [[0, -0.5j], [0.5j, 0]])
    assert np.allclose(rep.sz, [[0.5, 0], [0, -0.5]])


def test_spin_one_explicit():
    rep = spin_matrices(1)
    r = 1 / math.sqrt(2)
    assert np.allclose(rep.sx, [[0, r, 0], [r, 0, r], [0, r, 0]])
    assert np.allclose(rep.sz, np.diag([1, 0, -1]))


@given(spins)
def test_casimir_and_commutators(s):
    rep = spin_matrices(s)
    sv = float(s)
    cas = rep.sx @ rep.sx + rep.sy @ rep.sy + rep.sz @ rep.sz
    assert np.allclose(cas, sv * (sv + 1) * np.eye(rep.dim), atol=1e-12)
    assert np.abs(rep.sx @ rep.sy - rep.sy @ rep.sx - 1j * rep.sz).max() < 1e-13


def test_spin_validation():
    with pytest.raises(ValueError):
        spin_matrices(0)
    with pytest.raises(ValueError):
        spin_matrices(0.3)
    with pytest.warns(SpinConditioningWarning):
        spin_matrices(half(11))


def test_unit_direction_checks():
    with pytest.raises(ValueError):
        UnitDirection(1.0, 0.1)
    with pytest.raises(ValueError):
        UnitDirection.from_vector(0.0, 0.0)
    n = UnitDirection.from_vector(3.0, 4.0)
    assert (n.nx, n.ny) == pytest.approx((0.6, 0.8))
    m = n.rotated(math.pi / 2)
    assert (m.nx, m.ny) == pytest.approx((-0.8, 0.6))


@given(spins, angles)
def test_projectors_match_eigendecomposition(s, phi):
    rep = spin_matrices(s)
    n = UnitDirection.from_angle(phi)
    for nu, p in projectors(rep, n).items():
        assert np.abs(p - eig_projector(rep, n, nu)).max() < 1e-11


def test_projector_rejects_missing_eigenvalue():
    with pytest.raises(ValueError):
        projector(spin_matrices(1), X_AXIS, half(1))


@given(spins, angles)
def test_mu_base_is_signed_reflection(s, phi):
    rep = spin_matrices(s)
    n = UnitDirection.from_angle(phi)
    mu = mu_base(rep, n)
    # eigenvalues +-1 only: an involution
    assert np.abs(mu @ mu - np.eye(rep.dim)).max() < 1e-12
    assert hermiticity_residual(mu) < 1e-13
    assert anticommutator_residual(rep, mu) < 1e-12
    w, v = np.linalg.eigh(rep.dot(n))
    signs = np.array([(-1) ** HalfInt.coerce(round(2 * x) / 2).floor() for x in w])
    oracle = canonical_sign(rep) * (v * signs) @ v.conj().T
    assert np.abs(mu - oracle).max() < 1e-11


@pytest.mark.parametrize("twice", range(1, 10))
def test_canonical_sign(twice):
    s = half(twice)
    rep = spin_matrices(s)
    mu = mu_base(rep, X_AXIS)
    anti = np.fliplr(np.eye(rep.dim))
    # antidiagonal with positive entries along the antidiagonal
    assert np.abs(mu * (1 - anti)).max() < 1e-12
    assert np.all(np.real(np.diag(np.fliplr(mu))) > 0.99)
    assert canonical_sign(rep) == (-1) ** s.floor()


@given(spins, angles)
def test_nik1_identity(s, phi):
    rep = spin_matrices(s)
    n = UnitDirection.from_angle(phi)
    for nu in rep.m_values:
        assert nik1_identity_residual(rep, n, nu) < 1e-12


@given(spins, angles, st.floats(-math.pi, math.pi))
def test_rotation_covariance(s, phi, theta):
    rep = spin_matrices(s)
    cs = CouplingSet.uniform(s, 1.3)
    n = UnitDirection.from_angle(phi)
    assert rotation_covariance_residual(lambda m: mu_hat(rep, m, cs), rep, theta, n) < 1e-12
    r = expm(-1j * theta * rep.sz)
    assert np.abs(r - rep.rotation(theta)).max() < 1e-13


@given(spins, angles)
def test_alternating_coefficients(s, phi):
    rep = spin_matrices(s)
    n = UnitDirection.from_angle(phi)
    c = lambda_coefficients(rep, n, mu_base(rep, n))
    vals = [c[nu] for nu in rep.m_values]
    assert all(abs(abs(v) - 1) < 1e-12 for v in vals)
    assert all(abs(a + b) < 1e-12 for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("twice", range(1, 10))
def test_b_c_tilde_algebra(twice):
    s = half(twice)
    rep = spin_matrices(s)
    labels = nonneg_labels(s)
    total = sum(b_tilde(rep, nu) for nu in labels)
    assert np.allclose(total, np.eye(rep.dim))
    for nu in labels:
        b = b_tilde(rep, nu)
        assert np.allclose(b @ b, b)
        # B_nu projects onto m = +-nu
        diag = np.real(np.diag(b))
        m = np.real(np.diag(rep.sz))
        assert np.array_equal(diag > 0.5, np.isclose(np.abs(m), float(nu)))
        if nu.twice:
            c = c_tilde(rep, nu)
            assert np.allclose(c @ c, b)
        else:
            assert not np.any(c_tilde(rep, nu))


def test_b_tilde_rejects_bad_label():
    with pytest.raises(ValueError):
        b_tilde(spin_matrices(1), half(1))


@given(spins, angles, st.data())
def test_unitary_reduction(s, phi, data):
    rep = spin_matrices(s)
    n = UnitDirection.from_angle(phi)
    vals = st.floats(-3, 3, allow_nan=False)
    labels = nonneg_labels(s)
    b = {nu: data.draw(vals) for nu in labels}
    d = {nu: data.draw(vals) for nu in labels if nu.twice}
    cs, u = unitary_reduce(rep, b, d)
    assert np.abs(u @ u.conj().T - np.eye(rep.dim)).max() < 1e-13
    scale = 1 + max(abs(v) for v in list(b.values()) + list(d.values()))
    assert np.abs(u @ mu_extended(rep, n, b, d) @ u.conj().T - mu_hat(rep, n, cs)).max() < 1e-12 * scale
    for nu in labels:
        want = math.hypot(b[nu], d[nu]) if nu.twice else b[nu]
        assert cs[nu] == pytest.approx(want, abs=1e-14)


def test_mu_extended_requires_all_parameters():
    rep = spin_matrices(half(3))
    with pytest.raises(KeyError):
        mu_extended(rep, X_AXIS, {half(3): 1.0}, {half(3): 0.0, half(1): 0.0})


def test_coupling_set_validation():
    with pytest.raises(ValueError):
        CouplingSet(HalfInt(2), {HalfInt(2): 1.0})
    cs = CouplingSet.uniform("3/2", 2.0)
    assert cs["1/2"] == 2.0
    assert [str(k) for k, _ in cs.items()] == ["3/2", "1/2"]


@given(angles, st.floats(-2, 2), st.floats(-2, 2))
def test_spin_one_closed_form(phi, l0, l1):
    rep = spin_matrices(1)
    n = UnitDirection.from_angle(phi)
    cs = CouplingSet(HalfInt(2), {HalfInt(0): l0, HalfInt(2): l1})
    sxn = rep.sx * n.ny - rep.sy * n.nx
    sdn = rep.dot(n)
    eye = np.eye(3)
    mu, lam = (l0 - l1) / 2, (l0 + l1) / 2
    closed = mu * (2 * sxn @ sxn - eye) + lam * (2 * sdn @ sdn - eye)
    assert np.abs(closed - mu_hat(rep, n, cs)).max() < 1e-12
    assert closed_form_check(rep, n, {0: l0, 1: l1}) < 1e-12


@given(angles, st.floats(-2, 2), st.floats(-2, 2))
def test_spin_three_halves_closed_form(phi, l12, l32):
    rep = spin_matrices(half(3))
    n = UnitDirection.from_angle(phi)
    cs = CouplingSet(half(3), {half(1): l12, half(3): l32})
    x = rep.sx * n.ny - rep.sy * n.nx
    mu, nu = (l32 - l12) / 6, 3 * l12 / 8 - l32 / 24
    closed = (nu * np.eye(4) + mu * rep.sz @ rep.sz) @ (7 * x - 4 * x @ x @ x)
    u = expm(0.5j * math.pi * rep.sz)
    assert np.abs(closed - u.conj().T @ mu_hat(rep, n, cs) @ u).max() < 1e-12
    assert closed_form_check(rep, n, {"1/2": l12, "3/2": l32}) < 1e-12


def test_closed_form_only_for_small_spins():
    with pytest.raises(ValueError):
        closed_form_check(spin_matrices(2), X_AXIS, {0: 1.0, 1: 1.0, 2: 1.0})


@pytest.mark.parametrize("twice", [1, 2, 3, 4, 5])
def test_mu_hat_field_matches_pointwise(twice, rng):
    s = half(twice)
    rep = spin_matrices(s)
    cs = CouplingSet(s, {nu: float(rng.uniform(0.5, 2)) for nu in nonneg_labels(s)})
    phi = rng.uniform(0, 2 * math.pi, 7)
    field = mu_hat_field(rep, np.cos(phi), np.sin(phi), cs)
    for k, p in enumerate(phi):
        assert np.abs(field[k] - mu_hat(rep, UnitDirection.from_angle(p), cs)).max() < 1e-12
    with pytest.raises(ValueError):
        mu_hat_field(rep, np.array([1.0]), np.array([1.0]), cs)


@pytest.mark.parametrize("twice", range(1, 8))
def test_radial_coupling_matrix_real_antidiagonal(twice):
    s = half(twice)
    rep = spin_matrices(s)
    cs = CouplingSet(s, {nu: 1.0 + 0.25 * nu.twice for nu in nonneg_labels(s)})
    m = radial_coupling_matrix(rep, cs)
    assert m.dtype == float
    anti = np.fliplr(np.eye(rep.dim))
    assert np.abs(m * (1 - anti)).max() == 0.0
    for nu in nonneg_labels(s):
        i = (s - nu).twice // 2
        want = -cs[nu] if nu.twice == 0 else cs[nu]
        assert m[i, rep.dim - 1 - i] == pytest.approx(want, abs=1e-13)
    assert np.allclose(radial_coupling_matrix(rep, cs, sign_flip=True), -m)


def test_matrix_json_roundtrip(rng):
    m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    back = matrix_from_json(matrix_to_json(m))
    assert np.array_equal(back, m)
    with pytest.raises(ValueError):
        matrix_from_json({"dim": 3, "entries": [[0.0, 0.0]]})
