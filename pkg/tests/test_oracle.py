import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinsusy.halfint import HalfInt, half
from spinsusy.oracle import (
    CoarseGridWarning,
    PlaneGrid,
    RadialGrid,
    convergence_order,
    count_below,
    discretize,
    eigenvector,
    lowest_eigenvalues,
    norm_squared,
    normalize,
    richardson,
    symmetry_residuals,
)
from spinsusy.oracle.plane import PlaneOperators, check_support, probe_functions, random_hermitian_field
from spinsusy.radial import RadialBlock
from spinsusy.spinalg import CouplingSet, mu_hat_field, spin_matrices
from spinsusy.states import BesselState
from spinsusy.susy import energy


def test_grid_basics():
    g = RadialGrid(10.0, 100)
    assert g.h == 0.1 and g.r_min == 0.05
    assert g.points[0] == pytest.approx(0.05) and g.points[-1] == pytest.approx(9.95)
    assert g.refined().n_points == 200
    with pytest.raises(ValueError):
        RadialGrid(0.0, 10)
    d = RadialGrid.default(0.5, 3, 1.0)
    assert d.r_max == pytest.approx(40 * 36) and d.n_points >= 8000
    assert d.covers(0.5, 2, 1.0)


@pytest.mark.parametrize("kappa, nu", [("1/2", "1/2"), ("3/2", "1/2"), ("2", "0"), ("1", "2")])
def test_band_matrix_against_dense(kappa, nu):
    H = discretize(RadialBlock(kappa, nu, 1.0), RadialGrid(30.0, 150))
    dense = H.to_dense()
    assert np.array_equal(dense, dense.T)
    w = np.linalg.eigvalsh(dense)
    assert lowest_eigenvalues(H, 4) == pytest.approx(w[:4], rel=1e-12, abs=1e-13)
    for sigma in (w[0] - 1, 0.5 * (w[1] + w[2]), 0.0, 5.0):
        assert count_below(H, sigma) == int(np.sum(w < sigma))
    lo, hi = H.gershgorin()
    assert lo <= w[0] and w[-1] <= hi


def test_eigenvector_is_normalised_eigenvector():
    H = discretize(RadialBlock(half(3), half(1), 1.0), RadialGrid(60.0, 600))
    e = lowest_eigenvalues(H, 2)
    u = eigenvector(H, e[1])
    assert u.shape == (2, 600)
    assert H.grid.h * np.sum(u**2) == pytest.approx(1.0, rel=1e-12)
    x = u.T.ravel() * math.sqrt(H.grid.h)
    assert np.linalg.norm(H.to_dense() @ x - e[1] * x) < 1e-8


def test_scalar_coulomb_levels():
    # -u'' + (k^2 - 1/4)/r^2 u - u/r: hydrogen-like, E_n = -1/(2k + 2n + 1)^2
    block = RadialBlock(1, 0, 1.0)
    grid = RadialGrid.default(1.0, 3, 1.0)
    coarse = lowest_eigenvalues(discretize(block, grid), 3)
    fine = lowest_eigenvalues(discretize(block, grid.refined()), 3)
    for n, (a, b) in enumerate(zip(coarse, fine)):
        assert richardson(a, b) == pytest.approx(-1 / (3 + 2 * n) ** 2, rel=1e-4)


def test_second_order_convergence_at_critical_block():
    block = RadialBlock(half(1), half(1), 1.0)
    # kappa = nu puts -1/(4 r^2) in the upper channel; the observed order approaches 2 from below
    e = [lowest_eigenvalues(discretize(block, RadialGrid(60.0, n)), 1)[0] for n in (2000, 4000, 8000)]
    assert 1.7 < convergence_order(*e) < 2.2
    assert abs(richardson(e[1], e[2]) - energy(block, 0)) < abs(e[2] - energy(block, 0))


@given(st.floats(-5, 5), st.floats(0.1, 3), st.floats(0.01, 0.1))
def test_richardson_exact_for_quadratic_error(e0, c, h):
    f = lambda h: e0 + c * h * h
    assert richardson(f(h), f(h / 2)) == pytest.approx(e0, abs=1e-12)
    assert convergence_order(f(h), f(h / 2), f(h / 4)) == pytest.approx(2.0, abs=1e-6)


def test_convergence_order_non_monotone():
    assert math.isnan(convergence_order(1.0, 1.0, 1.0))
    assert math.isnan(convergence_order(1.0, 0.5, 0.7))


def test_coarse_grid_warning():
    with pytest.warns(CoarseGridWarning):
        H = discretize(RadialBlock(half(1), half(1), 50.0), RadialGrid(100.0, 50))
    assert H.coarse


def test_solver_argument_checks():
    H = discretize(RadialBlock(half(1), half(1), 1.0), RadialGrid(10.0, 40))
    with pytest.raises(ValueError):
        lowest_eigenvalues(H, 0)
    with pytest.raises(ValueError):
        lowest_eigenvalues(H, H.dim + 1)
    with pytest.raises(ValueError):
        discretize({-2: np.array([[1.0, 0.1], [0.1, 1.0]])}, RadialGrid(10.0, 10))


def test_laurent_input_matches_block():
    block = RadialBlock(half(5), half(3), 0.7)
    grid = RadialGrid(20.0, 100)
    a = discretize(block, grid)
    b = discretize(block.laurent(), grid)
    assert np.array_equal(a.band, b.band) and a.label == block.label


def test_determinism():
    block = RadialBlock(half(3), half(3), 2.0)
    grid = RadialGrid(80.0, 4000)
    assert lowest_eigenvalues(discretize(block, grid), 3) == lowest_eigenvalues(discretize(block, grid), 3)


@pytest.mark.parametrize("beta", [0.2, 1.0, 3.5])
def test_norm_squared_closed_form(beta):
    # int r^2 K_{1/2}(beta r)^2 dr = pi / (8 beta^3)
    state = BesselState(beta, [{(1.0, 1): 1.0}])
    assert norm_squared(state) == pytest.approx(math.pi / (8 * beta**3), rel=1e-11)
    unit = normalize(state)
    assert unit.norm == 1.0
    assert norm_squared(unit) == pytest.approx(1.0, rel=1e-11)
    assert unit.components[0][(1.0, 1)] > 0


def test_normalize_rejects_zero():
    with pytest.raises(ValueError):
        normalize(BesselState.zero(1.0, 2))


# -- plane operators ----------------------------------------------------------


def test_plane_grid():
    g = PlaneGrid(20.0, 64)
    assert g.h == pytest.approx(20 / 64)
    assert 0.0 not in g.axis
    assert g.refined().n == 128
    for bad in [(0.0, 64), (20.0, 7), (20.0, 65)]:
        with pytest.raises(ValueError):
            PlaneGrid(*bad)


def test_probe_functions_fit_in_the_box():
    rep = spin_matrices(1)
    g = PlaneGrid(20.0, 128)
    fs = probe_functions(rep, g)
    assert len(fs) == 6 and fs[0].shape == (3, 128, 128)
    for f in fs:
        check_support(f)
    wide = np.ones((3, 128, 128))
    with pytest.raises(ValueError):
        check_support(wide)


def test_discrete_hamiltonian_is_hermitian():
    rep = spin_matrices(half(1))
    g = PlaneGrid(20.0, 64)
    x, y = g.mesh()
    r = np.hypot(x, y)
    ops = PlaneOperators(rep, g, mu_hat_field(rep, x / r, y / r, CouplingSet.uniform(half(1), 1.0)))
    f, k = probe_functions(rep, g, 2)
    assert np.vdot(f, ops.H(k)) == pytest.approx(np.vdot(ops.H(f), k), rel=1e-12)
    assert np.vdot(f, ops.Jz(k)) == pytest.approx(np.vdot(ops.Jz(f), k), rel=1e-12)


@pytest.mark.parametrize("s", ["1/2", "1"])
def test_commutators_converge_on_small_grids(s):
    g = PlaneGrid(20.0, 128)
    a = symmetry_residuals(s, 1.0, g, count=3)
    b = symmetry_residuals(s, 1.0, g.refined(), count=3)
    for name in a:
        assert b[name] < a[name] / 3


def test_random_matrix_control_does_not_converge():
    g = PlaneGrid(20.0, 128)
    a = symmetry_residuals("1/2", 1.0, g, control=True, count=3)
    b = symmetry_residuals("1/2", 1.0, g.refined(), control=True, count=3)
    assert b["Jz"] > 0.05 and b["Jz"] > 0.5 * a["Jz"]
    field = random_hermitian_field(spin_matrices(half(1)), g)
    assert np.allclose(field[0, 0], field[0, 0].conj().T)
