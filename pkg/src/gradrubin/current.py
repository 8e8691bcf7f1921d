"""Integral equation for the inflow current j0 and the flux J.

Requiring d(psi)/dy(x, 0) = -g for the stream function generated by the
transported current gives

    -(K j0)(x) - J / L = g_tilde(x),
    (K j0)(x) = (1/2pi) int sum_n a_n(eta) exp(i n (x - eta)) j0(eta) d eta,
    a_n(eta) = int_0^L S_n(y) exp(-i n Lambda(eta, y)) DX(eta, y) dy,

with S_n(y) = sinh(k (L - y)) / sinh(k L), k = |n|.  Single-valuedness of the
pressure adds mean(j0 (1 + f^-)) = 0.

The kernel is split as a = a0 + a1.  The convolution part a0(k) = tanh(kL/2)/k
does not depend on eta and is applied as an exact circulant; a1 vanishes when
the field lines are straight.  a1 is further split into four pieces,

    piece 1 =  int exp(-k y) (exp(-i n Lambda) - 1) DX dy
    piece 2 =  int exp(-k y) (DX - 1) dy
    piece 3 = -int M(n, y) (exp(-i n Lambda) - 1) DX dy
    piece 4 = -int M(n, y) (DX - 1) dy

using exp(-k y) - M(n, y) = S_n(y).  T_i = K0^{-1} K_i are the perturbation
operators built from the pieces.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from gradrubin import _kernels, hyperbolic
from gradrubin.boundary import DerivedBoundary
from gradrubin.errors import KernelError, SolvabilityError
from gradrubin.flow_map import CharacteristicSolution
from gradrubin.grid import PeriodicGrid, exp_weights, quadrature_weights


def compute_M(n, y, L: float):
    """exp(-2kL) (exp(ky) - exp(-ky)) / (1 - exp(-2kL)); y / L in the k -> 0 limit."""
    return hyperbolic.wall_correction(n, y, L)


def mode_weights(grid: PeriodicGrid, n_max: int | None = None) -> dict[str, np.ndarray]:
    """Quadrature weights in y against exp(-k y), S_n(y) and M(n, y) for n = 0..n_max."""
    n_max = grid.Nx // 2 if n_max is None else n_max
    y, L = grid.y, grid.L
    lo = np.empty((n_max + 1, grid.Ny))
    S = np.empty_like(lo)
    for n in range(n_max + 1):
        if n == 0:
            w = quadrature_weights(grid)
            lo[n] = w
            S[n] = w * (L - y) / L
            continue
        w_lo, w_hi = exp_weights(grid, float(n))
        E = np.exp(-n * L)
        lo[n] = w_lo
        S[n] = (w_lo - E * w_hi) / (-np.expm1(-2.0 * n * L))
    return {"exp": lo, "S": S, "M": lo - S}


@dataclass(frozen=True)
class KernelCoefficients:
    n: np.ndarray  # 0 .. n_max
    a0: np.ndarray  # (M,)
    pieces: np.ndarray  # (4, M, Nx) complex
    grid: PeriodicGrid

    @property
    def a1(self) -> np.ndarray:
        return self.pieces.sum(axis=0)

    @property
    def a(self) -> np.ndarray:
        return self.a0[:, None] + self.a1

    @property
    def tail(self) -> float:
        """Size of the perturbation kernel in the last retained mode."""
        return float(np.max(np.abs(self.a1[-1])))


def assemble_kernel(chars: CharacteristicSolution, n_max: int | None = None) -> KernelCoefficients:
    grid = chars.grid
    n_max = grid.Nx // 2 if n_max is None else n_max
    if not 0 <= n_max <= grid.Nx // 2:
        raise ValueError(f"n_max must lie in [0, {grid.Nx // 2}], got {n_max}")
    w = mode_weights(grid, n_max)
    nvals = np.arange(n_max + 1, dtype=float)
    Lam = np.ascontiguousarray(chars.Lambda)
    DX = np.ascontiguousarray(chars.DX)
    A_lo, B_lo = _kernels.bracket_sums(Lam, DX, nvals, np.ascontiguousarray(w["exp"]))
    A_M, B_M = _kernels.bracket_sums(Lam, DX, nvals, np.ascontiguousarray(w["M"]))
    pieces = np.stack([A_lo, B_lo.astype(complex), -A_M, -B_M.astype(complex)])
    if not np.all(np.isfinite(pieces)):
        raise KernelError("kernel quadrature produced non-finite values")
    a0 = hyperbolic.kernel_symbol(nvals, grid.L)
    return KernelCoefficients(nvals.astype(np.int64), a0, pieces, grid)


def direct_kernel(chars: CharacteristicSolution) -> np.ndarray:
    """a_n(eta) by straightforward quadrature of the undecomposed integrand."""
    grid = chars.grid
    w = mode_weights(grid)["S"]
    n = np.arange(w.shape[0])
    integrand = np.exp(-1j * n[:, None, None] * chars.Lambda[None]) * chars.DX[None]
    return np.einsum("ny,nky->nk", w, integrand)


# ---------------------------------------------------------------------------
# Operators on grid functions of eta
# ---------------------------------------------------------------------------


def _even_symbol(N: int, func) -> np.ndarray:
    return func(np.abs(np.fft.fftfreq(N, d=1.0 / N)))


def apply_T0(values, L: float) -> np.ndarray:
    """Convolution part of K: multiplier tanh(kL/2)/k, L/2 at k = 0."""
    values = np.asarray(values, dtype=float)
    m = _even_symbol(values.shape[0], lambda k: hyperbolic.kernel_symbol(k, L))
    return np.fft.ifft(np.fft.fft(values) * m).real


def apply_T0_inverse(values, L: float) -> np.ndarray:
    """Inverse of :func:`apply_T0`: multiplier k / tanh(kL/2), 2/L at k = 0."""
    values = np.asarray(values, dtype=float)
    m = _even_symbol(values.shape[0], lambda k: hyperbolic.inverse_kernel_symbol(k, L))
    return np.fft.ifft(np.fft.fft(values) * m).real


def _circulant(N: int, L: float, inverse: bool = False) -> np.ndarray:
    f = apply_T0_inverse if inverse else apply_T0
    return np.column_stack([f(e, L) for e in np.eye(N)])


def kernel_matrix(coeffs: np.ndarray, grid: PeriodicGrid) -> np.ndarray:
    """Collocation of (1/2pi) int sum_n c_n(eta) e^{in(x - eta)} u(eta) d eta on the nodes."""
    x = np.asarray(grid.x, dtype=float)
    c = np.zeros((grid.Nx // 2 + 1, grid.Nx), dtype=complex)
    c[: coeffs.shape[0]] = coeffs
    return _kernels.assemble_matrix(c, x, x, grid.Nx)


def perturbation_matrices(kernel: KernelCoefficients) -> np.ndarray:
    """Matrices of T_1..T_4, shape (4, Nx, Nx)."""
    grid = kernel.grid
    Tinv = _circulant(grid.Nx, grid.L, inverse=True)
    return np.stack([Tinv @ kernel_matrix(p, grid) for p in kernel.pieces])


def apply_T_i(i: int, kernel: KernelCoefficients, j0) -> np.ndarray:
    if i not in (1, 2, 3, 4):
        raise ValueError(f"i must be 1, 2, 3 or 4, got {i}")
    grid = kernel.grid
    Kj = kernel_matrix(kernel.pieces[i - 1], grid) @ np.asarray(j0, dtype=float)
    return apply_T0_inverse(Kj, grid.L)


def decomposed_flux(kernel: KernelCoefficients, derived: DerivedBoundary, j0) -> float:
    """J from the mean of the preconditioned equation and the single-valuedness constraint.

    2 J / L^2 = -<G> - sum_i <T_i j0> + <j0 f^->.
    """
    j0 = np.asarray(j0, dtype=float)
    L = kernel.grid.L
    s = -np.mean(derived.G) + np.mean(j0 * derived.f_minus)
    for i in (1, 2, 3, 4):
        s -= np.mean(apply_T_i(i, kernel, j0))
    return 0.5 * L * L * s


# ---------------------------------------------------------------------------
# Augmented system
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CurrentSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    K: np.ndarray
    kernel: KernelCoefficients
    derived: DerivedBoundary


@dataclass(frozen=True)
class CurrentSolution:
    j0: np.ndarray
    J: float
    residual: float
    constraint: float
    cond: float
    diagnostics: dict = field(default_factory=dict)


def assemble_system(kernel: KernelCoefficients, derived: DerivedBoundary) -> CurrentSystem:
    grid = kernel.grid
    N, L = grid.Nx, grid.L
    K = _circulant(N, L) + kernel_matrix(kernel.a1, grid)
    A = np.zeros((N + 1, N + 1))
    A[:N, :N] = -K
    A[:N, N] = -1.0 / L
    A[N, :N] = (1.0 + derived.f_minus) * grid.hx
    rhs = np.zeros(N + 1)
    rhs[:N] = derived.g_tilde
    if not np.all(np.isfinite(A)):
        raise KernelError("current system has non-finite entries")
    return CurrentSystem(A, rhs, K, kernel, derived)


def solve_current(system: CurrentSystem, cond_limit: float = 1e12) -> CurrentSolution:
    A, rhs = system.matrix, system.rhs
    try:
        sol = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise SolvabilityError(f"current system is singular: {exc}") from exc
    cond = float(np.linalg.cond(A))
    if not np.isfinite(cond) or cond > cond_limit:
        warnings.warn(f"current system is ill-conditioned (cond = {cond:.3e})", RuntimeWarning, stacklevel=2)
    N = A.shape[0] - 1
    j0, J = sol[:N], float(sol[N])
    res = A @ sol - rhs
    return CurrentSolution(
        j0=j0,
        J=J,
        residual=float(np.max(np.abs(res[:N]))),
        constraint=float(abs(res[N])),
        cond=cond,
        diagnostics={"kernel_tail": system.kernel.tail},
    )


# ---------------------------------------------------------------------------
# Neumann-series diagnostic
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NeumannReport:
    norm: float
    errors: list
    converged: bool

    @property
    def sweeps(self) -> int:
        return len(self.errors)


def upsilon_matrix(kernel: KernelCoefficients, derived: DerivedBoundary) -> np.ndarray:
    """Matrix of j -> -sum_i (T_i j - <T_i j>) - <j f^->."""
    N = kernel.grid.Nx
    T = perturbation_matrices(kernel).sum(axis=0)
    P = np.eye(N) - np.full((N, N), 1.0 / N)
    return -P @ T - np.outer(np.ones(N), derived.f_minus) / N


def neumann_diagnostic(
    kernel: KernelCoefficients,
    derived: DerivedBoundary,
    j0_direct,
    max_sweeps: int = 50,
    tol: float = 1e-13,
) -> NeumannReport:
    """Norm of the Neumann operator and the error history of its iteration.

    The norm is the sup-induced one (largest absolute row sum).  The
    iteration j <- Y j - (G - <G>) starts from zero and runs only if the
    norm is below one.
    """
    Y = upsilon_matrix(kernel, derived)
    norm = float(np.max(np.sum(np.abs(Y), axis=1)))
    src = derived.G - np.mean(derived.G)
    j0_direct = np.asarray(j0_direct, dtype=float)
    scale = max(1.0, float(np.max(np.abs(j0_direct))))
    errors = []
    if norm >= 1.0:
        return NeumannReport(norm, errors, False)
    j = np.zeros_like(j0_direct)
    for _ in range(max_sweeps):
        j = Y @ j - src
        errors.append(float(np.max(np.abs(j - j0_direct))))
        if errors[-1] <= tol * scale:
            break
    return NeumannReport(norm, errors, errors[-1] <= 1e-9 * scale)
