import numpy as np
import pytest

from gradrubin.boundary import BoundaryData
from gradrubin.driver import (
    SolverConfig,
    diff_norms,
    gamma_step,
    pressure_alternate,
    reconstruct_pressure,
    solve,
)
from gradrubin.errors import ConfigError
from gradrubin.linear import solve_linearized

from conftest import manufactured_data, single_mode_data


def test_config_validation():
    for bad in (dict(relaxation=0.0), dict(relaxation=1.5), dict(tol_fixed_point=0.0), dict(max_iter=0),
                dict(alpha=1.0)):
        with pytest.raises(ConfigError):
            SolverConfig(**bad)


def test_gamma_fixes_rest(grid):
    res = gamma_step(np.zeros((2,) + grid.shape), BoundaryData.zeros(grid.Nx), grid, SolverConfig())
    assert np.max(np.abs(res.W)) == 0


def test_gamma_at_rest_is_linear(grid):
    errs = []
    for eps in (1e-2, 1e-3):
        bd = single_mode_data(grid, eps)
        lin = solve_linearized(bd, grid)
        res = gamma_step(np.zeros((2,) + grid.shape), bd, grid, SolverConfig())
        assert np.max(np.abs(res.W - lin.W)) <= 1e-12
        res = gamma_step(lin.W, bd, grid, SolverConfig())
        errs.append(np.max(np.abs(res.W - lin.W)))
    assert 1.8 < np.log10(errs[0] / errs[1]) < 2.2


def test_manufactured_fixed_point(grid):
    f = 0.05 * np.cos(grid.x)
    b = np.zeros((2,) + grid.shape)
    b[1] = f[:, None]
    res = gamma_step(b, manufactured_data(grid), grid, SolverConfig())
    assert np.max(np.abs(res.W - b)) <= 1e-10


def test_trivial_solve():
    eq = solve(BoundaryData.zeros(64), SolverConfig())
    assert eq.converged and eq.report.iterations == 1
    assert np.all(eq.B[1] == 1.0) and np.all(eq.B[0] == 0) and np.all(eq.j == 0)
    assert np.ptp(eq.p) == 0


def test_small_data_contraction(grid):
    eq = solve(single_mode_data(grid, 0.02), SolverConfig())
    r = eq.report
    assert eq.converged and r.iterations <= 15
    assert max(r.contraction_ratios) < 0.2
    assert r.history[-1]["diff_c1"] <= 1e-10
    assert r.residuals.passed, r.residuals.table()


def test_manufactured_solve(grid):
    eq = solve(manufactured_data(grid), SolverConfig())
    f = 0.05 * np.cos(grid.x)
    exact = np.zeros((2,) + grid.shape)
    exact[1] = 1 + f[:, None]
    assert np.max(np.abs(eq.B - exact)) <= 1e-6


def test_pressure_closed_form(grid):
    f = 0.05 * np.cos(grid.x)
    B = np.zeros((2,) + grid.shape)
    B[1] = 1 + f[:, None]
    j = np.repeat(-0.05 * np.sin(grid.x)[:, None], grid.Ny, 1)
    p, loop = reconstruct_pressure(B, j, grid)
    pe = -(f + f**2 / 2)
    assert np.max(np.abs(p - (pe - pe[0])[:, None])) <= 1e-8
    assert loop <= 1e-15
    p, loop = reconstruct_pressure(B, np.zeros(grid.shape), grid)
    assert np.all(p == 0) and loop == 0


def test_path_independence(grid):
    eq = solve(single_mode_data(grid, 0.03), SolverConfig())
    alt = pressure_alternate(eq.B, eq.j, grid)
    assert np.max(np.abs(alt - eq.p)) <= 1e-7 * np.max(np.abs(eq.p))
    assert eq.report.loop_defect <= 1e-9


def test_relaxation_still_converges(grid):
    eq = solve(single_mode_data(grid, 0.02), SolverConfig(relaxation=0.7, max_iter=60))
    assert eq.converged
    ref = solve(single_mode_data(grid, 0.02), SolverConfig())
    assert np.max(np.abs(eq.B - ref.B)) <= 1e-9


def test_large_data_reported_not_hidden():
    from gradrubin.grid import PeriodicGrid

    g = PeriodicGrid(32, 33, 1.0)
    x = g.x
    bd = BoundaryData(0.9 * np.cos(3 * x), 0.9 * np.cos(3 * x), 3.0 * np.sin(2 * x))
    with pytest.warns(RuntimeWarning):
        eq = solve(bd, SolverConfig(Nx=32, Ny=33, max_iter=30))
    assert eq.report.status in ("diverged", "max_iter")


def test_max_iter_status(grid):
    eq = solve(single_mode_data(grid, 0.02), SolverConfig(max_iter=1))
    assert eq.report.status == "max_iter"


def test_diff_norms(grid):
    X, Y = grid.mesh()
    s, c1 = diff_norms(np.sin(X), grid)
    assert s == pytest.approx(1.0, abs=1e-3)
    assert c1 == pytest.approx(2.0, abs=1e-2)
