"""Spectral solver for the Grad-Rubin problem of 2-D magneto-hydrostatics on a periodic channel."""

from gradrubin.boundary import BoundaryData, DerivedBoundary, derive
from gradrubin.driver import Equilibrium, SolverConfig, gamma_step, reconstruct_pressure, solve
from gradrubin.grid import PeriodicGrid
from gradrubin.linear import LinearSolution, solve_linearized
from gradrubin.verify import Tolerances, residual_suite

__version__ = "0.1.0"

__all__ = [
    "BoundaryData",
    "DerivedBoundary",
    "Equilibrium",
    "LinearSolution",
    "PeriodicGrid",
    "SolverConfig",
    "Tolerances",
    "derive",
    "gamma_step",
    "reconstruct_pressure",
    "residual_suite",
    "solve",
    "solve_linearized",
]
