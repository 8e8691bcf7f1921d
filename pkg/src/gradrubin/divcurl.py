"""Div-curl (Biot-Savart) inversion on the channel.

Given a current j, the normal traces and the horizontal flux J, the field
W = (0, A) + perp-grad(psi) is recovered from the Dirichlet problem

    Laplace(psi) = j,   psi(x, 0) = h^-(x),   psi(x, L) = -J + h^+(x).

Each Fourier mode is a two-point problem psi'' - k^2 psi = rhs, solved with
the free-space Green's function -exp(-k|y - s|) / (2k) plus a homogeneous
correction.  Both exponentials are decaying, so nothing overflows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gradrubin.boundary import BoundaryData, derive
from gradrubin.grid import (
    PeriodicGrid,
    cumulative_exp_matrix,
    differentiate,
    half_spectrum,
    quadrature_weights,
)


@dataclass(frozen=True)
class ModeBVP:
    n: int
    rhs: np.ndarray
    bc0: complex = 0.0
    bcL: complex = 0.0


def _particular(k: float, rhs: np.ndarray, grid: PeriodicGrid) -> np.ndarray:
    """Particular solution with the free-space kernel; rhs may be (Ny,) or (Ny, P)."""
    U = cumulative_exp_matrix(grid, k)
    if k == 0.0:
        y = grid.y.reshape((-1,) + (1,) * (rhs.ndim - 1))
        P = U @ rhs
        Q = U @ (y * rhs)
        return y * P - Q
    u = U @ rhs
    v = (U @ rhs[::-1])[::-1]
    return -(u + v) / (2.0 * k)


def _homogeneous(k: float, r0, rL, grid: PeriodicGrid) -> np.ndarray:
    y, L = grid.y, grid.L
    if k == 0.0:
        return np.multiply.outer(1.0 - y / L, r0) + np.multiply.outer(y / L, rL)
    E = np.exp(-k * L)
    den = -np.expm1(-2.0 * k * L)
    c1 = (r0 - E * rL) / den
    c2 = (rL - E * r0) / den
    return np.multiply.outer(np.exp(-k * y), c1) + np.multiply.outer(np.exp(-k * (L - y)), c2)


def solve_mode_bvp(mode: ModeBVP, grid: PeriodicGrid) -> np.ndarray:
    """psi'' - n^2 psi = rhs on the y-nodes with psi(0) = bc0, psi(L) = bcL."""
    rhs = np.asarray(mode.rhs)
    if rhs.shape[0] != grid.Ny:
        raise ValueError(f"rhs has {rhs.shape[0]} entries, grid has Ny = {grid.Ny}")
    if not np.all(np.isfinite(rhs)):
        raise ValueError("mode right-hand side is not finite")
    k = float(abs(mode.n))
    part = _particular(k, rhs.astype(complex), grid)
    out = part + _homogeneous(k, mode.bc0 - part[0], mode.bcL - part[-1], grid)
    out[0] = mode.bc0
    out[-1] = mode.bcL
    return out


def solve_stream(j, bottom, top, grid: PeriodicGrid) -> np.ndarray:
    """Dirichlet problem Laplace(psi) = j with psi(., 0) = bottom, psi(., L) = top."""
    j = np.asarray(j, dtype=float)
    if j.shape != grid.shape:
        raise ValueError(f"current has shape {j.shape}, grid is {grid.shape}")
    jh = half_spectrum(j, axis=0)
    b0 = half_spectrum(np.asarray(bottom, dtype=float))
    bL = half_spectrum(np.asarray(top, dtype=float))
    psi_h = np.empty_like(jh)
    for n in range(jh.shape[0]):
        psi_h[n] = solve_mode_bvp(ModeBVP(n, jh[n], b0[n], bL[n]), grid)
    psi = np.fft.irfft(psi_h * grid.Nx, n=grid.Nx, axis=0)
    psi[:, 0] = bottom
    psi[:, -1] = top
    return psi


def perp_gradient(psi, A: float, grid: PeriodicGrid) -> np.ndarray:
    """W = (0, A) + (-d psi/dy, d psi/dx), shape (2, Nx, Ny)."""
    W = np.empty((2,) + grid.shape)
    W[0] = -differentiate(psi, 1, grid)
    W[1] = A + differentiate(psi, 0, grid)
    return W


def biot_savart(j, boundary: BoundaryData, J: float, grid: PeriodicGrid) -> tuple[np.ndarray, np.ndarray]:
    """Divergence-free W with curl W = j, W.n = f on both walls and horizontal flux J."""
    d = derive(boundary, grid)
    psi = solve_stream(j, d.h_minus, d.h_plus - J, grid)
    return perp_gradient(psi, d.A, grid), psi


def flux(W, grid: PeriodicGrid, column: int = 0) -> float:
    """int_0^L W_1(x_column, y) dy."""
    return float(quadrature_weights(grid) @ np.asarray(W)[0, column])
