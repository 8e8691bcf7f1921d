"""Overflow-safe hyperbolic ratios in the wavenumber k = |n| >= 0.

Everything is written with E = exp(-k L) and friends so no exponent is
positive; the k = 0 entries are the analytic limits.
"""

import numpy as np


def _k(k):
    return np.abs(np.asarray(k, dtype=float))


def sinh_ratio(k, y, L):
    """sinh(k y) / sinh(k L), limit y / L at k = 0."""
    k = _k(k)
    y = np.asarray(y, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.exp(-k * (L - y)) * (-np.expm1(-2.0 * k * y)) / (-np.expm1(-2.0 * k * L))
    return np.where(k == 0, y / L, out)


def sinh_ratio_complement(k, y, L):
    """sinh(k (L - y)) / sinh(k L), limit (L - y) / L at k = 0."""
    return sinh_ratio(k, L - np.asarray(y, dtype=float), L)


def k_coth(k, L):
    """k / tanh(k L), limit 1 / L."""
    k = _k(k)
    with np.errstate(invalid="ignore", divide="ignore"):
        E2 = np.exp(-2.0 * k * L)
        out = k * (1.0 + E2) / (-np.expm1(-2.0 * k * L))
    return np.where(k == 0, 1.0 / L, out)


def k_csch(k, L):
    """k / sinh(k L), limit 1 / L."""
    k = _k(k)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = 2.0 * k * np.exp(-k * L) / (-np.expm1(-2.0 * k * L))
    return np.where(k == 0, 1.0 / L, out)


def kernel_symbol(k, L):
    """(cosh(kL) - 1) / (k sinh(kL)) = tanh(kL/2) / k, limit L / 2.

    This is int_0^L sinh(k (L - y)) / sinh(k L) dy, the Fourier symbol of the
    convolution part of the inflow-current operator.
    """
    k = _k(k)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = -np.expm1(-k * L) / (k * (1.0 + np.exp(-k * L)))
    return np.where(k == 0, L / 2.0, out)


def inverse_kernel_symbol(k, L):
    """k sinh(kL) / (cosh(kL) - 1) = k / tanh(kL/2), limit 2 / L."""
    k = _k(k)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = k * (1.0 + np.exp(-k * L)) / (-np.expm1(-k * L))
    return np.where(k == 0, 2.0 / L, out)


def wall_correction(n, y, L):
    """M(n, y) = exp(-2kL) (exp(ky) - exp(-ky)) / (1 - exp(-2kL)).

    Satisfies exp(-k y) - M = sinh(k (L - y)) / sinh(k L); the k -> 0 limit
    is y / L.
    """
    k = _k(n)
    y = np.asarray(y, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        E = np.exp(-k * L)
        out = E * (np.exp(-k * (L - y)) - E * np.exp(-k * y)) / (-np.expm1(-2.0 * k * L))
    return np.where(k == 0, y / L, out)
