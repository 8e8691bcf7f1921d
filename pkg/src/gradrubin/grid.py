"""Grid of the periodic channel S^1 x [0, L] and the operators living on it.

The x direction is periodic and handled with the discrete Fourier transform.
The y direction is bounded; it is represented nodally and differentiated with
finite differences, integrated with local-polynomial product quadrature.

Fields are plain arrays: scalar fields have shape ``(Nx, Ny)``, vector fields
``(2, Nx, Ny)``, boundary traces ``(Nx,)``.  Axis 0 is always x.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from scipy.interpolate import CubicSpline

from gradrubin import _kernels
from gradrubin.errors import DomainError, GridError

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class PeriodicGrid:
    """Tensor grid: ``Nx`` equispaced x-nodes on [0, 2pi), ``Ny`` y-nodes on [0, L]."""

    Nx: int
    Ny: int
    L: float = 1.0

    def __post_init__(self):
        if self.Nx < 2 or self.Nx % 2:
            raise GridError(f"Nx must be a positive even integer, got {self.Nx}")
        if self.Ny < 2:
            raise GridError(f"Ny must be at least 2, got {self.Ny}")
        if not self.L > 0:
            raise GridError(f"L must be positive, got {self.L}")

    @cached_property
    def x(self) -> np.ndarray:
        x = TWO_PI * np.arange(self.Nx) / self.Nx
        x.flags.writeable = False
        return x

    @cached_property
    def y(self) -> np.ndarray:
        y = np.linspace(0.0, self.L, self.Ny)
        y.flags.writeable = False
        return y

    @property
    def hx(self) -> float:
        return TWO_PI / self.Nx

    @property
    def hy(self) -> float:
        return self.L / (self.Ny - 1)

    @cached_property
    def modes(self) -> np.ndarray:
        """Integer wavenumbers in FFT order, -Nx/2 .. Nx/2-1."""
        n = np.fft.fftfreq(self.Nx, d=1.0 / self.Nx).round().astype(np.int64)
        n.flags.writeable = False
        return n

    @cached_property
    def half_modes(self) -> np.ndarray:
        """Non-negative wavenumbers 0 .. Nx/2 (rfft order)."""
        n = np.arange(self.Nx // 2 + 1)
        n.flags.writeable = False
        return n

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x, self.y, indexing="ij")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.Nx, self.Ny)


# ---------------------------------------------------------------------------
# Fourier side (x)
# ---------------------------------------------------------------------------


def dft_forward(values, axis: int = 0) -> np.ndarray:
    """Coefficients c_n = (1/N) sum_k v_k exp(-i n x_k), FFT ordering."""
    values = np.asarray(values)
    if values.ndim == 0:
        raise GridError("dft_forward needs at least one axis")
    return np.fft.fft(values, axis=axis) / values.shape[axis]


def dft_inverse(coeffs, axis: int = 0, real: bool = True) -> np.ndarray:
    coeffs = np.asarray(coeffs)
    out = np.fft.ifft(coeffs, axis=axis) * coeffs.shape[axis]
    return out.real if real else out


def check_length(values, Nx: int) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.shape[:1] != (Nx,):
        raise GridError(f"expected {Nx} x-samples, got shape {values.shape}")
    return values


def _wavenumbers(N: int) -> np.ndarray:
    return np.fft.fftfreq(N, d=1.0 / N).round()


def _odd(mult: np.ndarray, N: int) -> np.ndarray:
    # the unmatched -N/2 mode has no partner; odd multipliers drop it
    mult[N // 2] = 0.0
    return mult


def derivative_multiplier(N: int) -> np.ndarray:
    n = _wavenumbers(N)
    return _odd(1j * n, N)


def hilbert_multiplier(N: int) -> np.ndarray:
    n = _wavenumbers(N)
    return _odd(-1j * np.sign(n), N)


def antiderivative_multiplier(N: int) -> np.ndarray:
    n = _wavenumbers(N)
    mult = np.zeros(N, dtype=complex)
    nz = n != 0
    mult[nz] = 1.0 / (1j * n[nz])
    return _odd(mult, N)


def _apply(coeffs, mult) -> np.ndarray:
    coeffs = np.asarray(coeffs)
    shape = (-1,) + (1,) * (coeffs.ndim - 1)
    return coeffs * mult.reshape(shape)


def hilbert_transform(coeffs) -> np.ndarray:
    """Periodic Hilbert transform on coefficients: multiplier -i sgn(n)."""
    coeffs = np.asarray(coeffs)
    return _apply(coeffs, hilbert_multiplier(coeffs.shape[0]))


def antiderivative_x(coeffs) -> np.ndarray:
    """Mean-zero primitive on coefficients: 1/(i n), the n = 0 mode dropped."""
    coeffs = np.asarray(coeffs)
    return _apply(coeffs, antiderivative_multiplier(coeffs.shape[0]))


def apply_multiplier(values, mult) -> np.ndarray:
    """Nodal in, nodal out: apply a Fourier multiplier along axis 0."""
    values = np.asarray(values, dtype=float)
    out = dft_inverse(_apply(dft_forward(values), np.asarray(mult)), real=False)
    return out.real


def even_multiplier(N: int, func) -> np.ndarray:
    """Tabulate a multiplier depending only on |n| (kept on the Nyquist mode)."""
    return np.asarray(func(np.abs(_wavenumbers(N))), dtype=float)


def primitive_x(values) -> np.ndarray:
    """F(x) = int_0^x v, exact for trigonometric polynomials (mean kept as slope)."""
    values = np.asarray(values, dtype=float)
    N = values.shape[0]
    x = TWO_PI * np.arange(N) / N
    mean = values.mean(axis=0)
    P = apply_multiplier(values - mean, antiderivative_multiplier(N))
    shape = (-1,) + (1,) * (values.ndim - 1)
    return P - P[0] + x.reshape(shape) * mean


# ---------------------------------------------------------------------------
# Finite differences (y)
# ---------------------------------------------------------------------------


def fd_weights(z: float, nodes, m: int) -> np.ndarray:
    """Fornberg's weights for derivatives 0..m at ``z`` from ``nodes``.

    Returns an array of shape (m + 1, len(nodes)).
    """
    x = np.asarray(nodes, dtype=float)
    n = x.size
    c = np.zeros((m + 1, n))
    c1, c4 = 1.0, x[0] - z
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2, c5, c4 = 1.0, c4, x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[k, i] = c1 * (k * c[k - 1, i - 1] - c5 * c[k, i - 1]) / c2
                c[0, i] = -c1 * c5 * c[0, i - 1] / c2
            for k in range(mn, 0, -1):
                c[k, j] = (c4 * c[k, j] - k * c[k - 1, j]) / c3
            c[0, j] = c4 * c[0, j] / c3
        c1 = c2
    return c


@lru_cache(maxsize=64)
def _fd_matrix(Ny: int, L: float, deriv: int, order: int) -> np.ndarray:
    y = np.linspace(0.0, L, Ny)
    s = min(order + deriv, Ny)
    D = np.zeros((Ny, Ny))
    for i in range(Ny):
        start = min(max(i - (s - 1) // 2, 0), Ny - s)
        idx = np.arange(start, start + s)
        D[i, idx] = fd_weights(y[i], y[idx], deriv)[deriv]
    D.flags.writeable = False
    return D


def fd_matrix(grid: PeriodicGrid, deriv: int = 1, order: int = 6) -> np.ndarray:
    """Dense y-differentiation matrix, centred inside, one-sided at the walls."""
    return _fd_matrix(grid.Ny, float(grid.L), deriv, order)


def differentiate(field, axis: int, grid: PeriodicGrid, order: int = 6) -> np.ndarray:
    """d/dx spectrally (axis 0) or d/dy by finite differences (axis 1)."""
    field = np.asarray(field, dtype=float)
    if axis == 0:
        return apply_multiplier(field, derivative_multiplier(grid.Nx))
    if axis == 1:
        return field @ fd_matrix(grid, 1, order).T
    raise GridError(f"axis must be 0 (x) or 1 (y), got {axis}")


# ---------------------------------------------------------------------------
# Product quadrature (y)
# ---------------------------------------------------------------------------


def _lagrange_basis(nodes: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Values of the Lagrange basis of ``nodes`` at points ``s``; shape (len(nodes), len(s))."""
    out = np.ones((nodes.size, s.size))
    for j in range(nodes.size):
        for i in range(nodes.size):
            if i != j:
                out[j] *= (s - nodes[i]) / (nodes[j] - nodes[i])
    return out


@lru_cache(maxsize=512)
def _cumulative_exp(Ny: int, L: float, k: float, npts: int) -> np.ndarray:
    y = np.linspace(0.0, L, Ny)
    npts = min(npts, Ny)
    U = np.zeros((Ny, Ny))
    for m in range(Ny - 1):
        a, b = y[m], y[m + 1]
        h = b - a
        start = min(max(m - (npts - 1) // 2, 0), Ny - npts)
        idx = np.arange(start, start + npts)
        ngl = 10 + int(3.0 * k * h)
        t, w = np.polynomial.legendre.leggauss(ngl)
        s = 0.5 * (a + b) + 0.5 * h * t
        kern = np.exp(-k * (b - s)) * 0.5 * h * w
        U[m + 1] = np.exp(-k * h) * U[m]
        U[m + 1, idx] += _lagrange_basis(y[idx], s) @ kern
    U.flags.writeable = False
    return U


def cumulative_exp_matrix(grid: PeriodicGrid, k: float, npts: int = 6) -> np.ndarray:
    """Matrix U with (U @ f)[m] = int_0^{y_m} exp(-k (y_m - s)) f(s) ds.

    f is replaced by its local degree ``npts - 1`` interpolant on each
    interval and the product with the exponential is integrated exactly, so
    the rule stays accurate when k * hy is not small.
    """
    return _cumulative_exp(grid.Ny, float(grid.L), float(k), npts)


def cumulative_integral(f, grid: PeriodicGrid, npts: int = 6) -> np.ndarray:
    """int_0^y f(x, s) ds along axis 1 (or axis 0 for 1-D input)."""
    U = cumulative_exp_matrix(grid, 0.0, npts)
    f = np.asarray(f)
    return f @ U.T if f.ndim > 1 else U @ f


def quadrature_weights(grid: PeriodicGrid, npts: int = 6) -> np.ndarray:
    """Weights w with sum(w * f) ~ int_0^L f dy."""
    return cumulative_exp_matrix(grid, 0.0, npts)[-1]


def exp_weights(grid: PeriodicGrid, k: float, npts: int = 6) -> tuple[np.ndarray, np.ndarray]:
    """Weight vectors for int_0^L exp(-k y) f dy and int_0^L exp(-k (L - y)) f dy."""
    to_top = cumulative_exp_matrix(grid, k, npts)[-1]
    return to_top[::-1].copy(), to_top


# ---------------------------------------------------------------------------
# Interpolation
# ---------------------------------------------------------------------------


def half_spectrum(values, axis: int = 0) -> np.ndarray:
    """rfft coefficients normalised like :func:`dft_forward`."""
    values = np.asarray(values, dtype=float)
    return np.fft.rfft(values, axis=axis) / values.shape[axis]


def trig_interpolate(values, x) -> np.ndarray:
    """Trigonometric interpolant of periodic nodal ``values`` evaluated at ``x``."""
    chalf = half_spectrum(values)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return _kernels.trig_eval(np.atleast_2d(chalf), x)[0]


def interpolate(field, grid: PeriodicGrid, x: float, y: float) -> float:
    """Value of a nodal field at (x, y): trigonometric in x, cubic spline in y."""
    tol = 1e-13 * grid.L
    if not (-tol <= y <= grid.L + tol):
        raise DomainError(f"y = {y} outside [0, {grid.L}]")
    field = np.asarray(field, dtype=float)
    if field.shape != grid.shape:
        raise GridError(f"field shape {field.shape} does not match grid {grid.shape}")
    x = float(np.mod(x, TWO_PI))
    s = x / grid.hx
    if abs(s - round(s)) <= 1e-12:
        col = field[int(round(s)) % grid.Nx]
    else:
        col = _kernels.trig_eval(half_spectrum(field).T.copy(), np.array([x]))[:, 0]
    j = np.searchsorted(grid.y, y)
    if j < grid.Ny and abs(grid.y[j] - y) <= tol:
        return float(col[j])
    return float(CubicSpline(grid.y, col)(min(max(y, 0.0), grid.L)))
