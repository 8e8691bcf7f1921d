"""Pure-numpy reference implementations of the hot kernels.

Half-spectrum convention throughout: ``c`` has M = N/2 + 1 entries for
n = 0 .. N/2 of a real periodic function, the last one being the Nyquist
mode which enters with weight 1 instead of 2.
"""

import numpy as np


def _weights(M):
    w = np.full(M, 2.0)
    w[0] = 1.0
    w[-1] = 1.0
    return w


def trig_eval(c, x):
    """Evaluate real trigonometric series; c (K, M) complex, x (P,) -> (K, P)."""
    M = c.shape[1]
    n = np.arange(M)
    E = np.exp(1j * np.outer(n, x))
    return ((c * _weights(M)) @ E).real


def _rhs(rc, rxc, X, DX):
    vals = trig_eval(np.vstack((rc, rxc)), X)
    return vals[0], vals[1] * DX


def rk4_flow(rc, rxc, eta, dy, nsteps, save_every):
    """Classical RK4 for dX/dy = r(X, y), dD/dy = r_x(X, y) D.

    ``rc``/``rxc`` hold the half-spectra of r and r_x on the 2*nsteps+1
    half-step levels met along the integration, in order.
    """
    P = eta.size
    nsave = nsteps // save_every + 1
    Xs = np.empty((P, nsave))
    Ds = np.empty((P, nsave))
    X = eta.astype(float).copy()
    D = np.ones(P)
    Xs[:, 0] = X
    Ds[:, 0] = D
    for s in range(nsteps):
        l0, l1, l2 = 2 * s, 2 * s + 1, 2 * s + 2
        k1x, k1d = _rhs(rc[l0], rxc[l0], X, D)
        k2x, k2d = _rhs(rc[l1], rxc[l1], X + 0.5 * dy * k1x, D + 0.5 * dy * k1d)
        k3x, k3d = _rhs(rc[l1], rxc[l1], X + 0.5 * dy * k2x, D + 0.5 * dy * k2d)
        k4x, k4d = _rhs(rc[l2], rxc[l2], X + dy * k3x, D + dy * k3d)
        X = X + dy / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        D = D + dy / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)
        if (s + 1) % save_every == 0:
            Xs[:, (s + 1) // save_every] = X
            Ds[:, (s + 1) // save_every] = D
    return Xs, Ds


def newton_invert(lam_c, dlam_c, x, tol, maxit):
    """Solve eta + Lambda(eta, y_m) = x for every target x and every level m.

    lam_c, dlam_c: (Ny, M) half-spectra of Lambda(., y_m) and its eta-derivative.
    Returns eta of shape (P, Ny).
    """
    Ny = lam_c.shape[0]
    out = np.empty((x.size, Ny))
    for m in range(Ny):
        c = np.vstack((lam_c[m], dlam_c[m]))
        eta = x - trig_eval(c[:1], x)[0]
        for _ in range(maxit):
            lam, dlam = trig_eval(c, eta)
            step = (eta + lam - x) / (1.0 + dlam)
            eta = eta - step
            if np.max(np.abs(step)) <= tol:
                break
        out[:, m] = eta
    return out


def bracket_sums(Lam, DX, nvals, w):
    """Quadrature sums of the two kernel brackets for every mode.

    A[n, k] = sum_y w[n, y] (exp(-i n Lam[k, y]) - 1) DX[k, y]
    B[n, k] = sum_y w[n, y] (DX[k, y] - 1)
    """
    phase = np.exp(-1j * nvals[:, None, None] * Lam[None, :, :]) - 1.0
    A = np.einsum("ny,nky->nk", w, phase * DX[None, :, :])
    B = (DX - 1.0) @ w.T
    return A, B.T


def assemble_matrix(a, x, eta, N):
    """K[m, k] = (1/N) sum_n a_n(eta_k) exp(i n (x_m - eta_k)), symmetric truncation."""
    M = a.shape[0]
    n = np.arange(M)
    right = a * np.exp(-1j * np.outer(n, eta)) * _weights(M)[:, None]
    left = np.exp(1j * np.outer(x, n))
    return (left @ right).real / N
