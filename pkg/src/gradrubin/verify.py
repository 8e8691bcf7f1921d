"""A-posteriori checks of a computed equilibrium.

The operators here are deliberately separate from the solver's.  Derivatives
in x are 8th-order periodic central differences, where the solver is
spectral.  Derivatives in y are explicit 4th-order differences by default or
2nd order on request, where the solver uses a 6th-order matrix.  The flux
integral is Simpson's rule, where the solver uses product quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict
from typing import TYPE_CHECKING

import numpy as np
from scipy.integrate import simpson

from gradrubin.grid import PeriodicGrid

if TYPE_CHECKING:  # pragma: no cover
    from gradrubin.boundary import BoundaryData
    from gradrubin.flow_map import CharacteristicSolution

RESIDUAL_NAMES = (
    "div_B",
    "curl_minus_j",
    "transport",
    "bc_normal_bottom",
    "bc_normal_top",
    "bc_tangential",
    "flux_defect",
    "momentum",
    "pressure_loop",
)

# central weights for the first derivative, offsets 1..4
_C8 = np.array([4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0])


# one-sided 4th-order weights at the first two rows
_W4_0 = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
_W4_1 = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0


def dx_fd(u, grid: PeriodicGrid) -> np.ndarray:
    """8th-order periodic central difference along axis 0."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    for m, c in enumerate(_C8, start=1):
        out += c * (np.roll(u, -m, axis=0) - np.roll(u, m, axis=0))
    return out / grid.hx


def dy_fd(u, grid: PeriodicGrid, order: int = 4) -> np.ndarray:
    """Explicit difference along axis 1 of order 2 or 4, one-sided at the walls."""
    u = np.asarray(u, dtype=float)
    h = grid.hy
    out = np.empty_like(u)
    if order == 2 or u.shape[-1] < 5:
        out[..., 1:-1] = (u[..., 2:] - u[..., :-2]) / (2.0 * h)
        out[..., 0] = (-3.0 * u[..., 0] + 4.0 * u[..., 1] - u[..., 2]) / (2.0 * h)
        out[..., -1] = (3.0 * u[..., -1] - 4.0 * u[..., -2] + u[..., -3]) / (2.0 * h)
        return out
    if order != 4:
        raise ValueError("order must be 2 or 4")
    out[..., 2:-2] = (-u[..., 4:] + 8.0 * u[..., 3:-1] - 8.0 * u[..., 1:-3] + u[..., :-4]) / (12.0 * h)
    for i, w in ((0, _W4_0), (1, _W4_1)):
        out[..., i] = u[..., :5] @ w / h
        out[..., -1 - i] = -(u[..., ::-1][..., :5] @ w) / h
    return out


def laplacian_fd(u, grid: PeriodicGrid, x_order: int = 8) -> np.ndarray:
    """Five-point-type Laplacian: 2nd-order in y, periodic central of order x_order in x.

    Only interior y-rows are meaningful; the wall rows are returned as NaN.
    """
    u = np.asarray(u, dtype=float)
    if x_order == 2:
        uxx = (np.roll(u, -1, 0) - 2.0 * u + np.roll(u, 1, 0)) / grid.hx**2
    elif x_order == 8:
        c = np.array([-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0])
        uxx = c[0] * u
        for m in range(1, 5):
            uxx = uxx + c[m] * (np.roll(u, -m, 0) + np.roll(u, m, 0))
        uxx = uxx / grid.hx**2
    else:
        raise ValueError("x_order must be 2 or 8")
    out = np.full_like(u, np.nan)
    out[:, 1:-1] = uxx[:, 1:-1] + (u[:, 2:] - 2.0 * u[:, 1:-1] + u[:, :-2]) / grid.hy**2
    return out


@dataclass(frozen=True)
class Tolerances:
    """Absolute-plus-relative tolerances of the residual suite."""

    residual: float = 1e-6
    boundary_normal: float = 1e-9
    tangential: float = 1e-6
    flux: float = 1e-9
    loop: float = 1e-9
    floor: float = 1e-13


@dataclass
class ResidualEntry:
    value: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value <= self.tol)


@dataclass
class ResidualReport:
    entries: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries.values())

    def failed(self) -> list[str]:
        return [k for k, e in self.entries.items() if not e.passed]

    def __getitem__(self, name) -> ResidualEntry:
        return self.entries[name]

    def to_dict(self) -> dict:
        return {k: {"value": e.value, "tol": e.tol, "pass": e.passed} for k, e in self.entries.items()}

    def table(self) -> str:
        rows = [f"{'residual':<18} {'value':>12} {'tol':>12}  status"]
        for k, e in self.entries.items():
            rows.append(f"{k:<18} {e.value:12.3e} {e.tol:12.3e}  {'PASS' if e.passed else 'FAIL'}")
        return "\n".join(rows)


def _sup(a) -> float:
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def residual_suite(
    eq, boundary: "BoundaryData", tol: Tolerances = Tolerances(), y_order: int = 4
) -> ResidualReport:
    """Every finitely checkable property of an equilibrium, with pass/fail against ``tol``.

    ``eq`` is anything with fields ``B`` (2, Nx, Ny), ``j``, ``p``, scalar ``J``
    and ``grid``.
    """
    grid = eq.grid
    B = np.asarray(eq.B, dtype=float)
    j = np.asarray(eq.j, dtype=float)
    p = np.asarray(eq.p, dtype=float)
    J = float(eq.J)
    B1, B2 = B
    jx, jy = dx_fd(j, grid), dy_fd(j, grid, y_order)
    sj = _sup(j)
    sB = max(_sup(B1), _sup(B2))
    f_scale = 1.0 + max(_sup(boundary.f_plus), _sup(boundary.f_minus))
    r = tol.residual
    e = {}
    e["div_B"] = ResidualEntry(_sup(dx_fd(B1, grid) + dy_fd(B2, grid, y_order)), r * sB + tol.floor)
    e["curl_minus_j"] = ResidualEntry(
        _sup(dx_fd(B2, grid) - dy_fd(B1, grid, y_order) - j), r * (sB + sj) + tol.floor
    )
    e["transport"] = ResidualEntry(_sup(B1 * jx + B2 * jy), r * sj * sB + tol.floor)
    e["bc_normal_bottom"] = ResidualEntry(
        _sup(B2[:, 0] - 1.0 - boundary.f_minus), tol.boundary_normal * f_scale
    )
    e["bc_normal_top"] = ResidualEntry(_sup(B2[:, -1] - 1.0 - boundary.f_plus), tol.boundary_normal * f_scale)
    e["bc_tangential"] = ResidualEntry(
        _sup(B1[:, 0] - boundary.g), tol.tangential * (1.0 + _sup(boundary.g))
    )
    e["flux_defect"] = ResidualEntry(
        abs(float(simpson(B1[0], x=np.asarray(grid.y))) - J), tol.flux * (1.0 + abs(J))
    )
    m1 = -j * B2 - dx_fd(p, grid)
    m2 = j * B1 - dy_fd(p, grid, y_order)
    e["momentum"] = ResidualEntry(max(_sup(m1), _sup(m2)), r * sj * sB + tol.floor)
    e["pressure_loop"] = ResidualEntry(abs(float(np.sum(-j[:, 0] * B2[:, 0]) * grid.hx)), tol.loop * (1.0 + sj))
    return ResidualReport({k: e[k] for k in RESIDUAL_NAMES})


# ---------------------------------------------------------------------------
# Hoelder-type monitor of the flow-map perturbations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HolderNorm:
    sup: float
    quotient: float
    x_quotient: float
    y_quotient: float

    @property
    def norm(self) -> float:
        return self.sup + self.quotient


@dataclass(frozen=True)
class HolderReport:
    Lambda: HolderNorm
    theta: HolderNorm
    alpha: float
    delta0: float
    delta1: float

    @property
    def within_budget(self) -> bool:
        return self.Lambda.norm < self.delta0 and self.theta.norm < self.delta1

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "Lambda": asdict(self.Lambda) | {"norm": self.Lambda.norm},
            "theta": asdict(self.theta) | {"norm": self.theta.norm},
            "delta0": self.delta0,
            "delta1": self.delta1,
            "within_budget": self.within_budget,
        }


def _strides(n: int, limit: int) -> list[int]:
    s, out = 1, []
    while s <= limit:
        out.append(s)
        s *= 2
    if limit >= 1 and limit not in out:
        out.append(limit)
    return out


def holder_quotients(u, grid: PeriodicGrid, alpha: float, rng: np.random.Generator, n_far: int = 4096):
    """Largest |u(P) - u(Q)| / d(P, Q)^alpha over neighbour, dyadic and random pairs.

    Returns (overall, along x, along y).
    """
    u = np.asarray(u, dtype=float)
    Nx, Ny = u.shape
    qx = 0.0
    for s in _strides(Nx, Nx // 2):
        d = min(s, Nx - s) * grid.hx
        qx = max(qx, _sup(np.roll(u, -s, axis=0) - u) / d**alpha)
    qy = 0.0
    for s in _strides(Ny, Ny - 1):
        qy = max(qy, _sup(u[:, s:] - u[:, :-s]) / (s * grid.hy) ** alpha)
    q = max(qx, qy)
    if n_far > 0:
        i1, i2 = rng.integers(0, Nx, n_far), rng.integers(0, Nx, n_far)
        k1, k2 = rng.integers(0, Ny, n_far), rng.integers(0, Ny, n_far)
        dxi = np.abs(i1 - i2)
        dxd = np.minimum(dxi, Nx - dxi) * grid.hx
        dyd = np.abs(k1 - k2) * grid.hy
        d = np.hypot(dxd, dyd)
        ok = d > 0
        if np.any(ok):
            q = max(q, float(np.max(np.abs(u[i1, k1] - u[i2, k2])[ok] / d[ok] ** alpha)))
    return q, qx, qy


def holder_monitor(
    chars: "CharacteristicSolution",
    alpha: float = 0.5,
    seed: int = 0,
    delta0: float = 0.5,
    delta1: float = 0.5,
    n_far: int = 4096,
) -> HolderReport:
    """Discrete Hoelder norms (sup plus largest difference quotient) of Lambda and theta."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    rng = np.random.default_rng(seed)
    norms = []
    for u in (chars.Lambda, chars.theta):
        q, qx, qy = holder_quotients(u, chars.grid, alpha, rng, n_far)
        norms.append(HolderNorm(_sup(u), q, qx, qy))
    return HolderReport(norms[0], norms[1], alpha, delta0, delta1)


# ---------------------------------------------------------------------------
# Steady Euler restatement
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EulerFlow:
    """Steady Euler flow obtained from an equilibrium: v = B, p_E = -(p + |B|^2 / 2)."""

    v: np.ndarray
    p: np.ndarray
    residual: float
    mhs_residual: float
    grid: PeriodicGrid


def euler_relabel(eq, y_order: int = 4) -> EulerFlow:
    grid = eq.grid
    B = np.asarray(eq.B, dtype=float)
    p = np.asarray(eq.p, dtype=float)
    j = eq.j
    v = B.copy()
    pE = -(p + 0.5 * (v[0] ** 2 + v[1] ** 2))
    adv = [v[0] * dx_fd(c, grid) + v[1] * dy_fd(c, grid, y_order) for c in v]
    r1 = adv[0] + dx_fd(pE, grid)
    r2 = adv[1] + dy_fd(pE, grid, y_order)
    j = np.asarray(j, dtype=float)
    m1 = -j * B[1] - dx_fd(p, grid)
    m2 = j * B[0] - dy_fd(p, grid, y_order)
    return EulerFlow(
        v=v,
        p=pE,
        residual=max(_sup(r1), _sup(r2)),
        mhs_residual=max(_sup(m1), _sup(m2)),
        grid=grid,
    )
