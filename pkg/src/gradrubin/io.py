"""Plain-text persistence of solutions and reports."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from gradrubin.grid import PeriodicGrid

FIELD_HEADER = ("x", "y", "B1", "B2", "j", "psi", "p")


@dataclass(frozen=True)
class StoredSolution:
    """Fields read back from disk; enough to rerun the residual suite."""

    grid: PeriodicGrid
    B: np.ndarray
    j: np.ndarray
    psi: np.ndarray
    p: np.ndarray
    j0: np.ndarray
    J: float


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_fields(path: Path, grid: PeriodicGrid, B, j, psi, p) -> None:
    X, Y = grid.mesh()
    cols = [X, Y, B[0], B[1], j, psi, p]
    with open(path, "w", newline="") as fh:
        fh.write(",".join(FIELD_HEADER) + "\n")
        flat = [np.asarray(c, dtype=float).ravel() for c in cols]
        for row in zip(*flat):
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_j0(path: Path, grid: PeriodicGrid, j0) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("x,j0\n")
        for x, v in zip(grid.x, j0):
            fh.write(f"{_fmt(x)},{_fmt(v)}\n")


def write_convergence(path: Path, history: list) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["iter", "diff_sup", "diff_c1", "contraction"])
        for h in history:
            c = h.get("contraction")
            w.writerow([h["iter"], _fmt(h["diff_sup"]), _fmt(h["diff_c1"]), "" if c is None else _fmt(c)])


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else str(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    return obj


def write_json(path: Path, data: dict) -> None:
    with open(path, "w") as fh:
        json.dump(_clean(data), fh, indent=2, sort_keys=True)
        fh.write("\n")


def emit_outputs(outdir, grid: PeriodicGrid, B, j, psi, p, j0, J: float, report: dict,
                 history: list | None = None) -> Path:
    """Write fields.csv, j0.csv, report.json and convergence.csv into ``outdir``."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    write_fields(outdir / "fields.csv", grid, B, j, psi, p)
    write_j0(outdir / "j0.csv", grid, j0)
    full = {"grid": {"Nx": grid.Nx, "Ny": grid.Ny, "L": grid.L}, "J": J} | report
    write_json(outdir / "report.json", full)
    write_convergence(outdir / "convergence.csv", history or [])
    return outdir


def load_solution(outdir) -> StoredSolution:
    outdir = Path(outdir)
    with open(outdir / "report.json") as fh:
        rep = json.load(fh)
    g = rep["grid"]
    grid = PeriodicGrid(int(g["Nx"]), int(g["Ny"]), float(g["L"]))
    with open(outdir / "fields.csv") as fh:
        header = fh.readline().strip().split(",")
        if tuple(header) != FIELD_HEADER:
            raise ValueError(f"unexpected header in fields.csv: {header}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.shape != (grid.Nx * grid.Ny, len(FIELD_HEADER)):
        raise ValueError(f"fields.csv has shape {data.shape}, expected {(grid.Nx * grid.Ny, 7)}")
    cols = {name: data[:, i].reshape(grid.shape) for i, name in enumerate(FIELD_HEADER)}
    j0 = np.loadtxt(outdir / "j0.csv", delimiter=",", skiprows=1, ndmin=2)[:, 1]
    B = np.stack([cols["B1"], cols["B2"]])
    return StoredSolution(grid, B, cols["j"], cols["psi"], cols["p"], j0, float(rep["J"]))
