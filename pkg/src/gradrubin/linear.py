"""Closed-form solution of the linearized problem.

With b = 0 the current is transported straight up, j(x, y) = j0(x), and the
stream function can be written mode by mode.  The inflow current is fixed by
requiring the over-determined boundary value d(psi)/dy(x, 0) = -g to hold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gradrubin import hyperbolic
from gradrubin.boundary import BoundaryData, DerivedBoundary, derive
from gradrubin.divcurl import perp_gradient
from gradrubin.grid import PeriodicGrid, dft_forward, dft_inverse, even_multiplier, apply_multiplier


@dataclass(frozen=True)
class LinearSolution:
    j0: np.ndarray
    J: float
    psi: np.ndarray
    W: np.ndarray
    derived: DerivedBoundary
    grid: PeriodicGrid

    @property
    def j(self) -> np.ndarray:
        return np.repeat(self.j0[:, None], self.grid.Ny, axis=1)


def solve_linear_j0(g_tilde, L: float) -> tuple[np.ndarray, float]:
    """Invert the straight-line kernel: -K0 j0 = g_tilde + J / L with mean(j0) = 0."""
    g_tilde = np.asarray(g_tilde, dtype=float)
    mult = -even_multiplier(g_tilde.shape[0], lambda k: hyperbolic.inverse_kernel_symbol(k, L))
    mult[0] = 0.0
    j0 = apply_multiplier(g_tilde, mult)
    J = -L * float(np.mean(g_tilde))
    return j0, J


def solve_linear_psi(j0, J: float, h_plus, h_minus, grid: PeriodicGrid) -> np.ndarray:
    """Stream function for a y-independent current and Dirichlet data h^-, -J + h^+."""
    L, y = grid.L, grid.y
    k = np.abs(grid.modes).astype(float)[:, None]
    jh = dft_forward(np.asarray(j0, dtype=float))[:, None]
    top = dft_forward(np.asarray(h_plus, dtype=float))
    top[0] -= J
    bot = dft_forward(np.asarray(h_minus, dtype=float))[:, None]
    Sp = hyperbolic.sinh_ratio(k, y[None, :], L)
    Sm = hyperbolic.sinh_ratio_complement(k, y[None, :], L)
    with np.errstate(invalid="ignore", divide="ignore"):
        part = np.where(k == 0, 0.5 * y * (y - L), (Sp + Sm - 1.0) / k**2)
    psi_hat = top[:, None] * Sp + bot * Sm + jh * part
    psi = dft_inverse(psi_hat, axis=0)
    # the Dirichlet rows are identities
    psi[:, 0] = h_minus
    psi[:, -1] = np.asarray(h_plus) - J
    return psi


def solve_linearized(boundary: BoundaryData, grid: PeriodicGrid) -> LinearSolution:
    d = derive(boundary, grid)
    j0, J = solve_linear_j0(d.g_tilde, grid.L)
    psi = solve_linear_psi(j0, J, d.h_plus, d.h_minus, grid)
    return LinearSolution(j0=j0, J=J, psi=psi, W=perp_gradient(psi, d.A, grid), derived=d, grid=grid)
