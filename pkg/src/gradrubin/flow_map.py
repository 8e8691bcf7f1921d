"""Field lines of B = (0, 1) + b followed upward from the inflow wall.

X(eta, y) is the abscissa at height y of the line leaving (eta, 0):

    dX/dy = r(X, y),   r = b1 / (1 + b2),   X(eta, 0) = eta,

and DX = dX/deta obeys the variational equation dDX/dy = r_x(X, y) DX.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from gradrubin import _kernels
from gradrubin.errors import DomainError, FoldError, GridError, KernelError, SingularFieldError
from gradrubin.grid import PeriodicGrid, TWO_PI, half_spectrum

DEFAULT_SUBSTEPS = 4


def _derivative_half(c: np.ndarray) -> np.ndarray:
    # exact derivative of the interpolant off the grid, Nyquist term included
    return c * (1j * np.arange(c.shape[-1]))


@dataclass(frozen=True)
class RatioField:
    """r = b1 / (1 + b2) and r_x as half-spectra splined in y."""

    grid: PeriodicGrid
    r_spline: CubicSpline
    rx_spline: CubicSpline
    min_denominator: float

    @classmethod
    def from_b(cls, b, grid: PeriodicGrid) -> "RatioField":
        b = np.asarray(b, dtype=float)
        if b.shape != (2,) + grid.shape:
            raise GridError(f"b must have shape {(2,) + grid.shape}, got {b.shape}")
        den = 1.0 + b[1]
        dmin = float(np.min(den))
        if not np.all(np.isfinite(b)):
            raise SingularFieldError("b contains non-finite values")
        if dmin <= 0.0:
            raise SingularFieldError(f"1 + b2 reaches {dmin:.3e}; field lines turn back")
        rc = half_spectrum(b[0] / den, axis=0).T
        rxc = _derivative_half(rc)
        return cls(grid, CubicSpline(grid.y, rc, axis=0), CubicSpline(grid.y, rxc, axis=0), dmin)

    def levels(self, ys) -> tuple[np.ndarray, np.ndarray]:
        ys = np.asarray(ys, dtype=float)
        return (
            np.ascontiguousarray(self.r_spline(ys)),
            np.ascontiguousarray(self.rx_spline(ys)),
        )

    @property
    def is_zero(self) -> bool:
        return not np.any(self.r_spline.c)


@dataclass(frozen=True)
class CharacteristicSolution:
    X: np.ndarray
    DX: np.ndarray
    Lambda: np.ndarray
    theta: np.ndarray
    grid: PeriodicGrid
    ratio: RatioField
    substeps: int
    norms: dict = field(default_factory=dict)


def _march(ratio: RatioField, eta: np.ndarray, y0: float, y1: float, nsteps: int, save_every: int):
    dy = (y1 - y0) / nsteps
    ys = y0 + 0.5 * dy * np.arange(2 * nsteps + 1)
    rc, rxc = ratio.levels(ys)
    return _kernels.rk4_flow(rc, rxc, np.ascontiguousarray(eta, dtype=float), dy, nsteps, save_every)


def integrate_characteristics(b, grid: PeriodicGrid, substeps: int = DEFAULT_SUBSTEPS) -> CharacteristicSolution:
    """Flow map and its foot-point derivative on every grid node."""
    if substeps < 1:
        raise ValueError("substeps must be >= 1")
    ratio = b if isinstance(b, RatioField) else RatioField.from_b(b, grid)
    eta = np.asarray(grid.x, dtype=float)
    nsteps = (grid.Ny - 1) * substeps
    X, DX = _march(ratio, eta, 0.0, grid.L, nsteps, substeps)
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(DX))):
        raise KernelError("characteristic integration produced non-finite values")
    if np.min(DX) <= 0.0:
        raise FoldError(f"d X / d eta reaches {np.min(DX):.3e}; neighbouring field lines cross")
    Lam = X - eta[:, None]
    Lam[:, 0] = 0.0
    theta = 1.0 / DX - 1.0
    norms = {
        "sup_Lambda": float(np.max(np.abs(Lam))),
        "sup_theta": float(np.max(np.abs(theta))),
        "min_DX": float(np.min(DX)),
        "min_denominator": ratio.min_denominator,
    }
    return CharacteristicSolution(X, DX, Lam, theta, grid, ratio, substeps, norms)


def invert_flow(b, grid: PeriodicGrid, x, y: float, substeps: int = DEFAULT_SUBSTEPS) -> np.ndarray:
    """Foot-point xi with X(xi, y) = x, by integrating the field line back down to y = 0."""
    if not 0.0 <= y <= grid.L:
        raise DomainError(f"y = {y} outside [0, {grid.L}]")
    ratio = b if isinstance(b, RatioField) else RatioField.from_b(b, grid)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if y == 0.0:
        return x.copy()
    nsteps = max(1, int(np.ceil(y / grid.hy * substeps - 1e-9)))
    Xs, _ = _march(ratio, x, y, 0.0, nsteps, nsteps)
    return Xs[:, -1]


def transport_current(j0, chars: CharacteristicSolution, tol: float = 1e-14, maxit: int = 50) -> np.ndarray:
    """j(x, y) = j0(X^{-1}(x, y)): the current is constant along field lines.

    The foot-points are found by Newton's method on eta + Lambda(eta, y) = x,
    with Lambda(., y) taken as its trigonometric interpolant at every level.
    """
    grid = chars.grid
    j0 = np.asarray(j0, dtype=float)
    if j0.shape != (grid.Nx,):
        raise GridError(f"j0 must have {grid.Nx} samples, got {j0.shape}")
    eta = foot_points(chars, tol, maxit)
    jc = half_spectrum(j0)[None, :]
    j = _kernels.trig_eval(jc, eta.ravel()).reshape(eta.shape)
    j[:, 0] = j0
    return j


def foot_points(chars: CharacteristicSolution, tol: float = 1e-14, maxit: int = 50) -> np.ndarray:
    """X^{-1}(x_k, y_m) on every grid node, shape (Nx, Ny)."""
    grid = chars.grid
    lam_c = np.ascontiguousarray(half_spectrum(chars.Lambda, axis=0).T)
    dlam_c = np.ascontiguousarray(_derivative_half(lam_c))
    eta = _kernels.newton_invert(lam_c, dlam_c, np.asarray(grid.x, dtype=float), tol, maxit)
    eta[:, 0] = grid.x
    return np.mod(eta, TWO_PI)
