"""Outer fixed-point iteration b -> Gamma(b) and pressure reconstruction.

One application of Gamma follows the field lines of (0, 1) + b, solves the
current equation for (j0, J), transports j0 along the lines and inverts the
div-curl problem.  The iteration starts from the linearized solution.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from gradrubin.boundary import BoundaryData, DerivedBoundary, derive
from gradrubin.current import (
    CurrentSolution,
    KernelCoefficients,
    assemble_kernel,
    assemble_system,
    decomposed_flux,
    neumann_diagnostic,
    solve_current,
)
from gradrubin.divcurl import perp_gradient, solve_stream
from gradrubin.errors import ConfigError, GradRubinError
from gradrubin.flow_map import CharacteristicSolution, integrate_characteristics, transport_current
from gradrubin.grid import PeriodicGrid, cumulative_integral, primitive_x
from gradrubin.linear import solve_linearized
from gradrubin.verify import HolderReport, ResidualReport, Tolerances, holder_monitor, residual_suite

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    Nx: int = 64
    Ny: int = 129
    L: float = 1.0
    tol_fixed_point: float = 1e-10
    max_iter: int = 100
    relaxation: float = 1.0
    smallness_budget: float = 0.1
    ode_substeps: int = 4
    alpha: float = 0.5
    delta0: float = 0.5
    delta1: float = 0.5
    seed: int = 0
    neumann: bool = True
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        if not 0.0 < self.relaxation <= 1.0:
            raise ConfigError(f"relaxation must lie in (0, 1], got {self.relaxation}")
        if self.tol_fixed_point <= 0 or self.smallness_budget <= 0:
            raise ConfigError("tolerances and the smallness budget must be positive")
        if self.max_iter < 1 or self.ode_substeps < 1:
            raise ConfigError("max_iter and ode_substeps must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        for k, v in vars(self.tolerances).items():
            if not v > 0:
                raise ConfigError(f"tolerance {k} must be positive, got {v}")

    @property
    def grid(self) -> PeriodicGrid:
        return PeriodicGrid(self.Nx, self.Ny, self.L)


@dataclass
class IterationReport:
    status: str = "max_iter"
    history: list = field(default_factory=list)
    error: str | None = None
    amplitude: float = 0.0
    smallness_budget: float = 0.0
    J_decomposed: float | None = None
    loop_defect: float | None = None
    path_defect: float | None = None
    current: dict = field(default_factory=dict)
    neumann: dict = field(default_factory=dict)
    holder: HolderReport | None = None
    residuals: ResidualReport | None = None

    @property
    def iterations(self) -> int:
        return len(self.history)

    @property
    def contraction_ratios(self) -> list[float]:
        return [h["contraction"] for h in self.history if h["contraction"] is not None]

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "iterations": self.iterations,
            "error": self.error,
            "amplitude": self.amplitude,
            "smallness_budget": self.smallness_budget,
            "within_smallness_budget": self.amplitude <= self.smallness_budget,
            "J_decomposed": self.J_decomposed,
            "loop_defect": self.loop_defect,
            "path_defect": self.path_defect,
            "current": self.current,
            "neumann": self.neumann,
            "holder": self.holder.to_dict() if self.holder else None,
            "residuals": self.residuals.to_dict() if self.residuals else None,
            "history": self.history,
        }


@dataclass
class Equilibrium:
    b: np.ndarray
    j: np.ndarray
    j0: np.ndarray
    J: float
    psi: np.ndarray
    p: np.ndarray
    grid: PeriodicGrid
    report: IterationReport = field(default_factory=IterationReport)

    @property
    def B(self) -> np.ndarray:
        B = self.b.copy()
        B[1] += 1.0
        return B

    @property
    def converged(self) -> bool:
        return self.report.status == "converged"


@dataclass(frozen=True)
class GammaResult:
    W: np.ndarray
    psi: np.ndarray
    j: np.ndarray
    current: CurrentSolution
    chars: CharacteristicSolution
    kernel: KernelCoefficients


def _stage(name, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except GradRubinError as exc:
        raise type(exc)(f"[{name}] {exc}") from exc


def gamma_step(b, boundary: BoundaryData, grid: PeriodicGrid, config: SolverConfig,
               derived: DerivedBoundary | None = None) -> GammaResult:
    """One application of the fixed-point map: returns W = Gamma(b) and its by-products."""
    d = derived if derived is not None else derive(boundary, grid)
    chars = _stage("flow_map", integrate_characteristics, b, grid, config.ode_substeps)
    kernel = _stage("kernel", assemble_kernel, chars)
    cur = _stage("current", lambda: solve_current(assemble_system(kernel, d)))
    j = _stage("transport", transport_current, cur.j0, chars)
    psi = _stage("biot_savart", solve_stream, j, d.h_minus, d.h_plus - cur.J, grid)
    W = perp_gradient(psi, d.A, grid)
    return GammaResult(W, psi, j, cur, chars, kernel)


def diff_norms(u, grid: PeriodicGrid) -> tuple[float, float]:
    """(sup norm, sup norm plus sup of first differences over the spacing)."""
    u = np.asarray(u)
    s = float(np.max(np.abs(u)))
    gx = np.max(np.abs(np.roll(u, -1, axis=-2) - u)) / grid.hx
    gy = np.max(np.abs(np.diff(u, axis=-1))) / grid.hy
    return s, s + float(max(gx, gy))


def reconstruct_pressure(B, j, grid: PeriodicGrid) -> tuple[np.ndarray, float]:
    """p from grad p = j x B, integrated along (0,0) -> (x,0) -> (x,y); p(0,0) = 0.

    Also returns |loop integral of (j x B) . dl over the inflow wall|.
    """
    B = np.asarray(B, dtype=float)
    j = np.asarray(j, dtype=float)
    F1 = -j * B[1]
    F2 = j * B[0]
    bottom = F1[:, 0]
    loop = abs(float(np.mean(bottom)) * 2.0 * np.pi)
    p = primitive_x(bottom)[:, None] + cumulative_integral(F2, grid)
    return p, loop


def pressure_alternate(B, j, grid: PeriodicGrid) -> np.ndarray:
    """Same potential integrated along (0,0) -> (0,y) -> (x,y)."""
    B = np.asarray(B, dtype=float)
    j = np.asarray(j, dtype=float)
    F1 = -j * B[1]
    F2 = j * B[0]
    left = cumulative_integral(F2[0], grid)
    return left[None, :] + primitive_x(F1)


def solve(boundary: BoundaryData, config: SolverConfig = SolverConfig()) -> Equilibrium:
    grid = config.grid
    d = derive(boundary, grid)
    report = IterationReport(amplitude=boundary.amplitude(), smallness_budget=config.smallness_budget)
    if report.amplitude > config.smallness_budget:
        warnings.warn(
            f"data amplitude {report.amplitude:.3e} exceeds the smallness budget {config.smallness_budget:.3e}",
            RuntimeWarning,
            stacklevel=2,
        )
    lin = solve_linearized(boundary, grid)
    b = lin.W.copy()
    state = dict(j=lin.j, j0=lin.j0, J=lin.J, psi=lin.psi)
    last = None
    prev = None
    growth = 0
    for it in range(1, config.max_iter + 1):
        try:
            res = gamma_step(b, boundary, grid, config, d)
        except GradRubinError as exc:
            report.status = "diverged"
            report.error = str(exc)
            log.warning("iteration %d failed: %s", it, exc)
            break
        dsup, dc1 = diff_norms(res.W - b, grid)
        ratio = dc1 / prev if prev else None
        report.history.append({"iter": it, "diff_sup": dsup, "diff_c1": dc1, "contraction": ratio})
        log.info("iter %3d  diff_sup %.3e  diff_c1 %.3e", it, dsup, dc1)
        last = res
        b = (1.0 - config.relaxation) * b + config.relaxation * res.W
        state = dict(j=res.j, j0=res.current.j0, J=res.current.J, psi=res.psi)
        if not np.all(np.isfinite(b)):
            report.status = "diverged"
            report.error = "iterate became non-finite"
            break
        if dc1 < config.tol_fixed_point:
            report.status = "converged"
            break
        growth = growth + 1 if prev is not None and dc1 > prev else 0
        prev = dc1
        if growth >= 3:
            report.status = "diverged"
            report.error = "fixed-point difference grew three times in a row"
            break

    eq = Equilibrium(b=b, grid=grid, p=np.zeros(grid.shape), report=report, **state)
    eq.p, report.loop_defect = reconstruct_pressure(eq.B, eq.j, grid)
    p_alt = pressure_alternate(eq.B, eq.j, grid)
    report.path_defect = float(np.max(np.abs(p_alt - eq.p)))
    if last is not None:
        cur = last.current
        report.current = {
            "J": cur.J,
            "residual": cur.residual,
            "constraint": cur.constraint,
            "cond": cur.cond,
            "kernel_tail": cur.diagnostics.get("kernel_tail"),
        }
        report.J_decomposed = decomposed_flux(last.kernel, d, cur.j0)
        if config.neumann:
            nr = neumann_diagnostic(last.kernel, d, cur.j0)
            report.neumann = {"norm": nr.norm, "errors": nr.errors, "converged": nr.converged}
        report.holder = holder_monitor(last.chars, config.alpha, config.seed, config.delta0, config.delta1)
    report.residuals = residual_suite(eq, boundary, config.tolerances)
    return eq
