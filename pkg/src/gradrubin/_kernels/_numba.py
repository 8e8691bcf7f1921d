"""numba versions of the kernels in :mod:`gradrubin._kernels._numpy`.

Same signatures and conventions; loops are written out so that the trig
sums run on a complex rotation recurrence instead of allocating exp tables.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _eval_one(c, x):
    M = c.shape[0]
    z = np.exp(1j * x)
    p = 1.0 + 0j
    acc = c[0].real
    for n in range(1, M):
        p *= z
        t = c[n] * p
        if n == M - 1:
            acc += t.real
        else:
            acc += 2.0 * t.real
    return acc


@njit(cache=True)
def trig_eval(c, x):
    K = c.shape[0]
    P = x.shape[0]
    out = np.empty((K, P))
    for k in range(K):
        for p in range(P):
            out[k, p] = _eval_one(c[k], x[p])
    return out


@njit(cache=True)
def _eval_pair(c1, c2, x):
    M = c1.shape[0]
    z = np.exp(1j * x)
    p = 1.0 + 0j
    a = c1[0].real
    b = c2[0].real
    for n in range(1, M):
        p *= z
        w = 1.0 if n == M - 1 else 2.0
        a += w * (c1[n] * p).real
        b += w * (c2[n] * p).real
    return a, b


@njit(cache=True)
def rk4_flow(rc, rxc, eta, dy, nsteps, save_every):
    P = eta.shape[0]
    nsave = nsteps // save_every + 1
    Xs = np.empty((P, nsave))
    Ds = np.empty((P, nsave))
    for p in range(P):
        X = eta[p]
        D = 1.0
        Xs[p, 0] = X
        Ds[p, 0] = D
        for s in range(nsteps):
            l0 = 2 * s
            l1 = l0 + 1
            l2 = l0 + 2
            r, rx = _eval_pair(rc[l0], rxc[l0], X)
            k1x, k1d = r, rx * D
            r, rx = _eval_pair(rc[l1], rxc[l1], X + 0.5 * dy * k1x)
            k2x, k2d = r, rx * (D + 0.5 * dy * k1d)
            r, rx = _eval_pair(rc[l1], rxc[l1], X + 0.5 * dy * k2x)
            k3x, k3d = r, rx * (D + 0.5 * dy * k2d)
            r, rx = _eval_pair(rc[l2], rxc[l2], X + dy * k3x)
            k4x, k4d = r, rx * (D + dy * k3d)
            X = X + dy / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
            D = D + dy / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)
            if (s + 1) % save_every == 0:
                Xs[p, (s + 1) // save_every] = X
                Ds[p, (s + 1) // save_every] = D
    return Xs, Ds


@njit(cache=True)
def newton_invert(lam_c, dlam_c, x, tol, maxit):
    Ny = lam_c.shape[0]
    P = x.shape[0]
    out = np.empty((P, Ny))
    for m in range(Ny):
        for p in range(P):
            eta = x[p] - _eval_one(lam_c[m], x[p])
            for _ in range(maxit):
                lam, dlam = _eval_pair(lam_c[m], dlam_c[m], eta)
                step = (eta + lam - x[p]) / (1.0 + dlam)
                eta -= step
                if abs(step) <= tol:
                    break
            out[p, m] = eta
    return out


@njit(cache=True)
def bracket_sums(Lam, DX, nvals, w):
    M = nvals.shape[0]
    Nx, Ny = Lam.shape
    A = np.zeros((M, Nx), dtype=np.complex128)
    B = np.zeros((M, Nx))
    for k in range(Nx):
        for y in range(Ny):
            d = DX[k, y]
            for i in range(M):
                ph = np.exp(-1j * nvals[i] * Lam[k, y])
                A[i, k] += w[i, y] * (ph - 1.0) * d
                B[i, k] += w[i, y] * (d - 1.0)
    return A, B


@njit(cache=True)
def assemble_matrix(a, x, eta, N):
    M = a.shape[0]
    Nx = x.shape[0]
    Ne = eta.shape[0]
    K = np.empty((Nx, Ne))
    for k in range(Ne):
        for m in range(Nx):
            z = np.exp(1j * (x[m] - eta[k]))
            p = 1.0 + 0j
            acc = a[0, k].real
            for n in range(1, M):
                p *= z
                wgt = 1.0 if n == M - 1 else 2.0
                acc += wgt * (a[n, k] * p).real
            K[m, k] = acc / N
    return K
