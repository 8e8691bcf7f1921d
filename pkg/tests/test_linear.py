import numpy as np
import pytest
from scipy.integrate import quad

from gradrubin.boundary import BoundaryData
from gradrubin.divcurl import flux
from gradrubin.grid import PeriodicGrid, dft_forward, dft_inverse, differentiate
from gradrubin.linear import solve_linear_j0, solve_linear_psi, solve_linearized


def forward_kernel(j0, L):
    """K0 j0 with the symbol int_0^L sinh(k(L-y))/sinh(kL) dy evaluated by adaptive quadrature."""
    c = dft_forward(j0)
    n = np.abs(np.fft.fftfreq(j0.size, 1 / j0.size))
    sym = np.array([quad(lambda y: (L - y) / L if k == 0 else np.sinh(k * (L - y)) / np.sinh(k * L), 0, L)[0]
                    for k in n])
    return dft_inverse(c * sym)


def test_zero_input():
    j0, J = solve_linear_j0(np.zeros(16), 1.0)
    assert np.all(j0 == 0) and J == 0


def test_constant_g_flux():
    # g = -1, f = 0: g_tilde = 1, J = -L mean(g_tilde)
    for L in (1.0, 2.5):
        g = PeriodicGrid(16, 17, L)
        sol = solve_linearized(BoundaryData(np.zeros(16), np.zeros(16), -np.ones(16)), g)
        assert sol.J == pytest.approx(-L, rel=1e-14)
        assert flux(sol.W, g) == pytest.approx(sol.J, abs=1e-12)


def test_single_mode_round_trip():
    N = 32
    x = 2 * np.pi * np.arange(N) / N
    j0, J = solve_linear_j0(np.cos(x), 1.0)
    assert np.max(np.abs(j0 + np.sinh(1) / (np.cosh(1) - 1) * np.cos(x))) < 1e-13
    # -K0 j0 - J/L must give back g_tilde
    assert np.max(np.abs(-forward_kernel(j0, 1.0) - J - np.cos(x))) < 1e-10


def test_psi_zero_mode_limits():
    g = PeriodicGrid(8, 33, 2.0)
    y = g.y
    z = np.zeros(8)
    psi = solve_linear_psi(np.full(8, 0.3), 0.0, z, z, g)
    assert np.max(np.abs(psi - 0.3 * y * (y - 2.0) / 2)) < 1e-14
    psi = solve_linear_psi(z, 0.0, z, np.full(8, 0.7), g)
    assert np.max(np.abs(psi - 0.7 * (2.0 - y) / 2.0)) < 1e-14
    assert np.max(np.abs(solve_linear_psi(z, 0.0, z, z, g))) == 0


def test_psi_boundary_rows():
    g = PeriodicGrid(16, 17, 1.0)
    x = g.x
    psi = solve_linear_psi(np.sin(x), 0.4, np.cos(x), np.sin(2 * x), g)
    assert np.all(psi[:, 0] == np.sin(2 * x))
    assert np.all(psi[:, -1] == np.cos(x) - 0.4)


def test_zero_data(grid):
    sol = solve_linearized(BoundaryData.zeros(grid.Nx), grid)
    assert np.max(np.abs(sol.W)) == 0 and np.max(np.abs(sol.j0)) == 0


@pytest.mark.parametrize("eps", [1e-2, 1e-4])
def test_tangential_condition(grid, eps):
    x = grid.x
    sol = solve_linearized(BoundaryData(np.zeros(grid.Nx), np.zeros(grid.Nx), eps * np.cos(x)), grid)
    assert np.max(np.abs(sol.W[0, :, 0] - eps * np.cos(x))) <= 1e-8 * eps


def test_normal_traces(grid):
    eps = 0.01
    f = eps * np.cos(grid.x)
    sol = solve_linearized(BoundaryData(f, f, np.zeros(grid.Nx)), grid)
    assert np.max(np.abs(sol.W[1, :, 0] - f)) <= 1e-10 * eps
    assert np.max(np.abs(sol.W[1, :, -1] - f)) <= 1e-10 * eps


def test_div_curl_and_linearity(grid, rng):
    from conftest import smooth_random_trace

    def data():
        f = smooth_random_trace(rng, grid.Nx, amp=0.01)
        fm = f + smooth_random_trace(rng, grid.Nx, amp=0.01, mean=False)
        return BoundaryData(f, fm, smooth_random_trace(rng, grid.Nx, amp=0.01))

    d1, d2 = data(), data()
    s1, s2 = solve_linearized(d1, grid), solve_linearized(d2, grid)
    W = s1.W
    div = differentiate(W[0], 0, grid) + differentiate(W[1], 1, grid)
    assert np.max(np.abs(div)) <= 1e-10 * np.max(np.abs(W))
    curl = differentiate(W[1], 0, grid) - differentiate(W[0], 1, grid)
    assert np.max(np.abs(curl - s1.j0[:, None])) <= 1e-8 * max(1e-3, np.max(np.abs(s1.j0)))
    assert abs(np.mean(s1.j0)) < 1e-15
    s12 = solve_linearized(
        BoundaryData(d1.f_plus + d2.f_plus, d1.f_minus + d2.f_minus, d1.g + d2.g), grid)
    assert np.max(np.abs(s12.W - s1.W - s2.W)) < 1e-12
    assert abs(s12.J - s1.J - s2.J) < 1e-12
