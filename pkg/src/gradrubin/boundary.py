"""Boundary data and the quantities derived from it.

The channel walls are y = 0 (inflow, where the tangential datum g is given)
and y = L.  The prescribed normal field is B.n = 1 + f, with f^- = f(., 0)
and f^+ = f(., L).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from gradrubin import hyperbolic
from gradrubin.errors import CompatibilityError, GridError
from gradrubin.grid import (
    PeriodicGrid,
    antiderivative_multiplier,
    apply_multiplier,
    check_length,
    dft_forward,
    dft_inverse,
    even_multiplier,
)


def render_modes(modes: dict, Nx: int) -> np.ndarray:
    """Nodal samples of c_0 + 2 Re sum_{n>=1} c_n exp(i n x).

    ``modes`` maps n >= 0 to a complex coefficient or a (re, im) pair.
    """
    x = 2.0 * np.pi * np.arange(Nx) / Nx
    out = np.zeros(Nx)
    for n, c in modes.items():
        n = int(n)
        if not isinstance(c, (complex, float, int)):
            c = complex(c[0], c[1])
        c = complex(c)
        if n < 0:
            raise GridError(f"mode lists take n >= 0 only (got {n}); -n is implied")
        if n >= Nx // 2:
            raise GridError(f"mode {n} is not resolved by Nx = {Nx}")
        if n == 0:
            if c.imag != 0.0:
                raise GridError("the n = 0 coefficient of a real trace must be real")
            out += c.real
        else:
            out += 2.0 * (c * np.exp(1j * n * x)).real
    return out


@dataclass(frozen=True)
class BoundaryData:
    """Prescribed traces sampled on the common x-grid."""

    f_plus: np.ndarray
    f_minus: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        Nx = np.asarray(self.f_plus).shape[0]
        for name in ("f_plus", "f_minus", "g"):
            arr = check_length(getattr(self, name), Nx).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @classmethod
    def zeros(cls, Nx: int) -> "BoundaryData":
        z = np.zeros(Nx)
        return cls(z, z, z)

    @classmethod
    def from_modes(cls, Nx: int, f_plus=None, f_minus=None, g=None) -> "BoundaryData":
        return cls(
            render_modes(f_plus or {}, Nx),
            render_modes(f_minus or {}, Nx),
            render_modes(g or {}, Nx),
        )

    @property
    def Nx(self) -> int:
        return self.f_plus.shape[0]

    def scaled(self, eps: float) -> "BoundaryData":
        return replace(self, f_plus=eps * self.f_plus, f_minus=eps * self.f_minus, g=eps * self.g)

    def amplitude(self) -> float:
        """Sup-norm proxy of the data size, ||f|| + ||g||."""
        f = max(np.max(np.abs(self.f_plus)), np.max(np.abs(self.f_minus)))
        return float(f + np.max(np.abs(self.g)))


@dataclass(frozen=True)
class DerivedBoundary:
    """Boundary quantities entering the stream-function problem."""

    A: float
    mean_plus: float
    mean_minus: float
    h_plus: np.ndarray
    h_minus: np.ndarray
    Z: np.ndarray
    g_tilde: np.ndarray
    G: np.ndarray
    f_minus: np.ndarray
    L: float


def check_compatibility(data: BoundaryData, rtol: float = 1e-12) -> float:
    """Common mean A of the two normal traces; raises if they disagree."""
    mp = float(np.mean(data.f_plus))
    mm = float(np.mean(data.f_minus))
    scale = 1.0 + max(np.max(np.abs(data.f_plus)), np.max(np.abs(data.f_minus)))
    if abs(mp - mm) > rtol * scale:
        raise CompatibilityError(
            f"net flux through the walls differs: mean(f+) = {mp!r}, mean(f-) = {mm!r}"
        )
    return 0.5 * (mp + mm)


def _primitive_from_zero(v: np.ndarray) -> np.ndarray:
    P = apply_multiplier(v, antiderivative_multiplier(v.shape[0]))
    return P - P[0]


def compute_h(data: BoundaryData, A: float) -> tuple[np.ndarray, np.ndarray]:
    """h(x) = int_0^x (f - A) for both walls."""
    return _primitive_from_zero(data.f_plus - A), _primitive_from_zero(data.f_minus - A)


def compute_Z(h_plus, h_minus, L: float) -> np.ndarray:
    """Wall-derivative contribution of the Dirichlet data to d(psi)/dy at y = 0."""
    h_plus = np.asarray(h_plus, dtype=float)
    h_minus = np.asarray(h_minus, dtype=float)
    k = np.abs(np.fft.fftfreq(h_plus.shape[0], d=1.0 / h_plus.shape[0]))
    Zhat = dft_forward(h_plus) * hyperbolic.k_csch(k, L) - dft_forward(h_minus) * hyperbolic.k_coth(k, L)
    return dft_inverse(Zhat)


def compute_g_tilde(g, Z) -> np.ndarray:
    return -np.asarray(g, dtype=float) - np.asarray(Z, dtype=float)


def compute_G(g_tilde, L: float) -> np.ndarray:
    """Inverse of the convolution part applied to g_tilde (symbol k coth(kL/2), 2/L at k=0)."""
    g_tilde = np.asarray(g_tilde, dtype=float)
    mult = even_multiplier(g_tilde.shape[0], lambda k: hyperbolic.inverse_kernel_symbol(k, L))
    return apply_multiplier(g_tilde, mult)


def derive(data: BoundaryData, grid: PeriodicGrid) -> DerivedBoundary:
    if data.Nx != grid.Nx:
        raise GridError(f"boundary data has {data.Nx} samples, grid has Nx = {grid.Nx}")
    A = check_compatibility(data)
    h_plus, h_minus = compute_h(data, A)
    Z = compute_Z(h_plus, h_minus, grid.L)
    g_tilde = compute_g_tilde(data.g, Z)
    return DerivedBoundary(
        A=A,
        mean_plus=float(np.mean(data.f_plus)),
        mean_minus=float(np.mean(data.f_minus)),
        h_plus=h_plus,
        h_minus=h_minus,
        Z=Z,
        g_tilde=g_tilde,
        G=compute_G(g_tilde, grid.L),
        f_minus=data.f_minus,
        L=grid.L,
    )
