"""TOML run configuration.

Blocks: ``[grid]``, ``[boundary.f_plus]``, ``[boundary.f_minus]``,
``[boundary.g]``, ``[solver]`` (with an optional ``[solver.tolerances]``),
``[output]`` and the optional ``[sweep]``.  Unknown keys are errors.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from gradrubin.boundary import BoundaryData, render_modes
from gradrubin.driver import SolverConfig
from gradrubin.errors import ConfigError, GradRubinError
from gradrubin.verify import Tolerances

_TOP = {"grid", "boundary", "solver", "output", "sweep"}
_GRID = {"Nx", "Ny", "L"}
_TRACES = ("f_plus", "f_minus", "g")
_SOLVER = {f.name for f in fields(SolverConfig)} - _GRID - {"tolerances"}
_TOLS = {f.name for f in fields(Tolerances)}
_OUTPUT = {"dir"}
_SWEEP = {"amplitudes"}


@dataclass(frozen=True)
class RunConfig:
    solver: SolverConfig
    boundary: BoundaryData
    output_dir: Path = Path("out")
    sweep: tuple = (0.04, 0.02, 0.01, 0.005)
    source: dict = field(default_factory=dict, compare=False)

    @property
    def grid(self):
        return self.solver.grid


def _check_keys(block: dict, allowed: set, where: str):
    if not isinstance(block, dict):
        raise ConfigError(f"[{where}] must be a table")
    extra = sorted(set(block) - allowed)
    if extra:
        raise ConfigError(f"unknown key(s) in [{where}]: {', '.join(extra)}")


def _trace(block, Nx: int, where: str) -> np.ndarray:
    if block is None:
        return np.zeros(Nx)
    _check_keys(block, {"modes", "nodes"}, where)
    if ("modes" in block) == ("nodes" in block):
        raise ConfigError(f"[{where}] needs exactly one of 'modes' or 'nodes'")
    if "nodes" in block:
        vals = np.asarray(block["nodes"], dtype=float)
        if vals.shape != (Nx,):
            raise ConfigError(f"[{where}] nodes must list {Nx} values, got {vals.size}")
        return vals
    modes = {}
    for key, val in block["modes"].items():
        try:
            n = int(key)
        except ValueError:
            raise ConfigError(f"[{where}.modes] key {key!r} is not an integer") from None
        if isinstance(val, (int, float)):
            val = [float(val), 0.0]
        if len(val) != 2:
            raise ConfigError(f"[{where}.modes] entry {key} must be [re, im]")
        modes[n] = complex(float(val[0]), float(val[1]))
    try:
        return render_modes(modes, Nx)
    except GradRubinError as exc:
        raise ConfigError(f"[{where}] {exc}") from exc


def parse_config(data: dict) -> RunConfig:
    _check_keys(data, _TOP, "top level")
    grid = data.get("grid", {})
    _check_keys(grid, _GRID, "grid")
    solver = dict(data.get("solver", {}))
    tol_block = solver.pop("tolerances", {})
    _check_keys(solver, _SOLVER, "solver")
    _check_keys(tol_block, _TOLS, "solver.tolerances")
    try:
        cfg = SolverConfig(**grid, **solver, tolerances=Tolerances(**tol_block))
        cfg.grid  # validates Nx, Ny, L
    except (TypeError, ValueError, GradRubinError) as exc:
        raise ConfigError(str(exc)) from exc
    bnd = data.get("boundary", {})
    _check_keys(bnd, set(_TRACES), "boundary")
    traces = {t: _trace(bnd.get(t), cfg.Nx, f"boundary.{t}") for t in _TRACES}
    out = data.get("output", {})
    _check_keys(out, _OUTPUT, "output")
    sweep = data.get("sweep", {})
    _check_keys(sweep, _SWEEP, "sweep")
    amps = tuple(float(a) for a in sweep.get("amplitudes", RunConfig.sweep))
    if not amps or any(a <= 0 for a in amps):
        raise ConfigError("[sweep] amplitudes must be positive")
    return RunConfig(
        solver=cfg,
        boundary=BoundaryData(**traces),
        output_dir=Path(out.get("dir", "out")),
        sweep=amps,
        source=data,
    )


def load_config(path) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return parse_config(data)


def with_seed(cfg: RunConfig, seed: int) -> RunConfig:
    return replace(cfg, solver=replace(cfg.solver, seed=int(seed)))
