import numpy as np
import pytest
from scipy.integrate import quad

from gradrubin.boundary import BoundaryData, derive
from gradrubin.current import (
    _circulant,
    apply_T0,
    apply_T0_inverse,
    apply_T_i,
    assemble_kernel,
    assemble_system,
    compute_M,
    decomposed_flux,
    direct_kernel,
    neumann_diagnostic,
    solve_current,
)
from gradrubin.driver import SolverConfig, gamma_step
from gradrubin.flow_map import integrate_characteristics
from gradrubin.linear import solve_linear_j0, solve_linearized

from conftest import manufactured_data, single_mode_data


def chars_for(grid, b1=0.0, b2=0.0):
    b = np.zeros((2,) + grid.shape)
    b[0], b[1] = b1, b2
    return integrate_characteristics(b, grid)


def test_M_examples():
    assert compute_M(0, 0.3, 1.0) == pytest.approx(0.3)  # y / L, not 0
    n, y, L = 3, 0.4, 1.0
    lhs = np.exp(-n * y) - compute_M(n, y, L)
    assert lhs == pytest.approx(np.sinh(n * (L - y)) / np.sinh(n * L), abs=1e-14)
    assert np.all(compute_M(np.arange(1, 50), 0.0, 1.0) == 0.0)


def test_kernel_at_rest(grid):
    k = assemble_kernel(chars_for(grid))
    assert np.all(k.pieces == 0)
    assert k.a0[0] == pytest.approx(0.5 * grid.L)
    n = np.arange(1, 33)
    assert np.allclose(k.a0[1:], (np.cosh(n) - 1) / (n * np.sinh(n)), rtol=1e-13)
    big = assemble_kernel.__globals__["hyperbolic"].kernel_symbol(np.array([1e4]), 1.0)
    assert big[0] * 1e4 == pytest.approx(1.0, abs=1e-12)


def test_kernel_constant_shift_closed_form(grid):
    eps = 0.05
    k = assemble_kernel(chars_for(grid, eps))
    assert np.all(k.pieces[1] == 0) and np.all(k.pieces[3] == 0)
    for n in (1, 4, 17, 32):
        S = lambda y: np.sinh(n * (1 - y)) / np.sinh(n)
        re = quad(lambda y: S(y) * np.cos(n * eps * y), 0, 1, epsabs=1e-15, limit=200)[0]
        im = -quad(lambda y: S(y) * np.sin(n * eps * y), 0, 1, epsabs=1e-15, limit=200)[0]
        assert np.max(np.abs(k.a[n] - (re + 1j * im))) <= 1e-10


def test_kernel_consistency(grid):
    X, Y = grid.mesh()
    ch = chars_for(grid, 0.04 * np.sin(X) * (1 + Y), 0.03 * np.cos(2 * X))
    k = assemble_kernel(ch)
    assert np.max(np.abs(direct_kernel(ch) - k.a)) <= 1e-9


def test_circulant_spectrum(grid):
    C = -_circulant(grid.Nx, grid.L)
    ev = np.sort(np.linalg.eigvalsh(0.5 * (C + C.T)))
    n = np.abs(np.fft.fftfreq(grid.Nx, 1 / grid.Nx))
    sym = np.where(n == 0, 0.5, (np.cosh(n) - 1) / np.maximum(n, 1) / np.sinh(np.maximum(n, 1)))
    assert np.allclose(ev, np.sort(-sym), atol=1e-13)
    d = derive(BoundaryData.zeros(grid.Nx), grid)
    sysm = assemble_system(assemble_kernel(chars_for(grid)), d)
    assert np.allclose(sysm.matrix[: grid.Nx, : grid.Nx], C, atol=1e-15)


def test_constant_probe(grid):
    X, Y = grid.mesh()
    ch = chars_for(grid, 0.03 * np.cos(X), 0.02 * np.sin(X))
    k = assemble_kernel(ch)
    sysm = assemble_system(k, derive(BoundaryData.zeros(grid.Nx), grid))
    row = sysm.K @ np.ones(grid.Nx)
    # (1/2pi) int a_0(eta) d eta = mean of the n = 0 kernel
    assert np.max(np.abs(row - np.mean(k.a[0].real))) < 1e-14


def test_T0_identities(rng):
    for _ in range(5):
        v = rng.normal(size=64)
        assert np.max(np.abs(apply_T0(apply_T0_inverse(v, 1.0), 1.0) - v)) < 1e-10
        assert np.max(np.abs(apply_T0_inverse(apply_T0(v, 1.0), 1.0) - v)) < 1e-10


def test_rest_reproduces_linear(grid):
    bd = BoundaryData(np.zeros(grid.Nx), np.zeros(grid.Nx), -np.ones(grid.Nx))
    d = derive(bd, grid)
    sol = solve_current(assemble_system(assemble_kernel(chars_for(grid)), d))
    j0, J = solve_linear_j0(d.g_tilde, grid.L)
    assert np.max(np.abs(sol.j0 - j0)) <= 1e-10 and abs(sol.J - J) <= 1e-10
    bd = single_mode_data(grid, 0.02)
    d = derive(bd, grid)
    sol = solve_current(assemble_system(assemble_kernel(chars_for(grid)), d))
    j0, J = solve_linear_j0(d.g_tilde, grid.L)
    assert np.max(np.abs(sol.j0 - j0)) <= 1e-10 and abs(sol.J - J) <= 1e-10


def test_zero_data(grid):
    d = derive(BoundaryData.zeros(grid.Nx), grid)
    sol = solve_current(assemble_system(assemble_kernel(chars_for(grid)), d))
    assert np.max(np.abs(sol.j0)) == 0 and sol.J == 0


def test_manufactured_current(grid):
    f = 0.05 * np.cos(grid.x)
    d = derive(manufactured_data(grid), grid)
    ch = chars_for(grid, 0.0, np.repeat(f[:, None], grid.Ny, 1))
    sol = solve_current(assemble_system(assemble_kernel(ch), d))
    assert np.max(np.abs(sol.j0 + 0.05 * np.sin(grid.x))) <= 1e-6
    assert abs(sol.J) <= 1e-9
    assert sol.constraint <= 1e-10


def test_quadratic_departure_from_linear(grid):
    cfg = SolverConfig()
    errs = []
    for eps in (1e-2, 1e-3):
        bd = single_mode_data(grid, eps)
        lin = solve_linearized(bd, grid)
        res = gamma_step(lin.W, bd, grid, cfg)
        errs.append(np.max(np.abs(res.current.j0 - lin.j0)))
    rate = np.log10(errs[0] / errs[1])
    assert 1.8 < rate < 2.2


@pytest.fixture(scope="module")
def nonlinear_state():
    from gradrubin.grid import PeriodicGrid

    g = PeriodicGrid(64, 129, 1.0)
    x = g.x
    bd = BoundaryData(0.02 * np.cos(x), 0.02 * np.cos(x + 0.4), 0.02 * np.sin(x) + 0.01)
    lin = solve_linearized(bd, g)
    res = gamma_step(lin.W, bd, g, SolverConfig())
    return g, bd, derive(bd, g), res


def test_J_cross_check(nonlinear_state):
    g, bd, d, res = nonlinear_state
    Jd = decomposed_flux(res.kernel, d, res.current.j0)
    assert abs(Jd - res.current.J) <= 1e-8
    assert res.current.constraint <= 1e-10
    assert abs(np.sum(res.current.j0 * (1 + d.f_minus)) * g.hx) <= 1e-10


def test_T_i_degenerate_at_rest(grid, rng):
    k = assemble_kernel(chars_for(grid))
    j0 = rng.normal(size=grid.Nx)
    for i in (1, 2, 3, 4):
        assert np.max(np.abs(apply_T_i(i, k, j0))) <= 1e-12 * np.max(np.abs(j0))
    with pytest.raises(ValueError):
        apply_T_i(5, k, j0)


def test_T_i_support_for_constant_shift(grid, rng):
    k = assemble_kernel(chars_for(grid, 0.05))
    j0 = rng.normal(size=grid.Nx)
    assert np.all(apply_T_i(2, k, j0) == 0) and np.all(apply_T_i(4, k, j0) == 0)
    assert np.max(np.abs(apply_T_i(1, k, j0))) > 1e-4
    assert np.max(np.abs(apply_T_i(3, k, j0))) > 1e-6


def test_neumann_at_rest(grid):
    bd = BoundaryData(np.zeros(grid.Nx), np.zeros(grid.Nx), 0.02 * np.sin(grid.x))
    d = derive(bd, grid)
    k = assemble_kernel(chars_for(grid))
    sol = solve_current(assemble_system(k, d))
    nr = neumann_diagnostic(k, d, sol.j0)
    assert nr.norm == 0.0
    assert nr.errors[0] <= 1e-14


def test_neumann_matches_direct(nonlinear_state):
    g, bd, d, res = nonlinear_state
    nr = neumann_diagnostic(res.kernel, d, res.current.j0)
    assert nr.norm < 1
    assert len(nr.errors) <= 20 and nr.errors[-1] <= 1e-9


def test_neumann_norm_grows_with_amplitude(grid):
    norms = []
    for eps in (0.005, 0.01, 0.02, 0.04):
        bd = single_mode_data(grid, eps)
        lin = solve_linearized(bd, grid)
        k = assemble_kernel(integrate_characteristics(lin.W, grid))
        nr = neumann_diagnostic(k, derive(bd, grid), np.zeros(grid.Nx), max_sweeps=1)
        norms.append(nr.norm)
    assert np.all(np.diff(norms) > 0)
    assert norms[-1] / norms[0] < 16  # roughly linear in the amplitude
