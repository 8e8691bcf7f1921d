"""Command-line front end.

    gradrubin --mode {solve-linear,solve,verify,sweep} --config run.toml [--out DIR] [--seed N]

Exit codes: 0 success, 2 configuration error, 3 no convergence, 4 residual
check failed, 5 input/output error.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from pathlib import Path

import numpy as np

from gradrubin.config import RunConfig, load_config, with_seed
from gradrubin.driver import Equilibrium, IterationReport, reconstruct_pressure, solve
from gradrubin.errors import CompatibilityError, ConfigError, GradRubinError
from gradrubin.io import emit_outputs, load_solution, write_json
from gradrubin.linear import solve_linearized
from gradrubin.verify import euler_relabel, residual_suite

EXIT_OK, EXIT_CONFIG, EXIT_DIVERGED, EXIT_RESIDUAL, EXIT_IO = 0, 2, 3, 4, 5

LINEAR_CHECKS = ("div_B", "curl_minus_j", "bc_normal_bottom", "bc_normal_top", "bc_tangential", "flux_defect")

log = logging.getLogger("gradrubin")


def _linear_equilibrium(cfg: RunConfig) -> Equilibrium:
    lin = solve_linearized(cfg.boundary, cfg.grid)
    eq = Equilibrium(b=lin.W, j=lin.j, j0=lin.j0, J=lin.J, psi=lin.psi, p=np.zeros(cfg.grid.shape),
                     grid=cfg.grid, report=IterationReport(status="linear"))
    eq.p, eq.report.loop_defect = reconstruct_pressure(eq.B, eq.j, cfg.grid)
    return eq


def _emit(eq: Equilibrium, outdir: Path, report: dict) -> None:
    emit_outputs(outdir, eq.grid, eq.B, eq.j, eq.psi, eq.p, eq.j0, eq.J, report, eq.report.history)


def run_solve_linear(cfg: RunConfig, outdir: Path) -> int:
    eq = _linear_equilibrium(cfg)
    res = residual_suite(eq, cfg.boundary, cfg.solver.tolerances)
    checked = {k: res.entries[k] for k in LINEAR_CHECKS}
    ok = all(e.passed for e in checked.values())
    report = {"mode": "solve-linear", "status": "linear", "residuals": res.to_dict(),
              "checked": list(LINEAR_CHECKS), "loop_defect": eq.report.loop_defect}
    _emit(eq, outdir, report)
    print(res.table())
    return EXIT_OK if ok else EXIT_RESIDUAL


def run_solve(cfg: RunConfig, outdir: Path) -> int:
    eq = solve(cfg.boundary, cfg.solver)
    rep = eq.report
    _emit(eq, outdir, {"mode": "solve"} | rep.to_dict())
    print(f"status {rep.status} after {rep.iterations} iteration(s), J = {eq.J:.17g}")
    print(rep.residuals.table())
    if rep.status != "converged":
        return EXIT_DIVERGED
    return EXIT_OK if rep.residuals.passed else EXIT_RESIDUAL


def run_verify(cfg: RunConfig, outdir: Path) -> int:
    stored = load_solution(outdir)
    if stored.grid != cfg.grid:
        raise ConfigError(f"stored grid {stored.grid} differs from configured grid {cfg.grid}")
    res = residual_suite(stored, cfg.boundary, cfg.solver.tolerances)
    euler = euler_relabel(stored)
    write_json(outdir / "verify.json", {"residuals": res.to_dict(), "euler_residual": euler.residual,
                                        "mhs_residual": euler.mhs_residual})
    print(res.table())
    return EXIT_OK if res.passed else EXIT_RESIDUAL


def run_sweep(cfg: RunConfig, outdir: Path) -> int:
    outdir.mkdir(parents=True, exist_ok=True)
    rows = []
    for eps in cfg.sweep:
        data = cfg.boundary.scaled(eps)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            eq = solve(data, cfg.solver)
        lin = solve_linearized(data, cfg.grid)
        diff = float(np.max(np.abs(eq.b - lin.W)))
        rows.append({"eps": eps, "diff": diff, "status": eq.report.status, "iterations": eq.report.iterations})
        print(f"eps {eps:.4g}  |b - b_lin| {diff:.6e}  {eq.report.status} ({eq.report.iterations} it)")
    eps = np.array([r["eps"] for r in rows])
    diff = np.array([r["diff"] for r in rows])
    slope = float(np.polyfit(np.log(eps), np.log(diff), 1)[0]) if np.all(diff > 0) and len(rows) > 1 else float("nan")
    print(f"log-log slope {slope:.4f}")
    with open(outdir / "sweep.csv", "w") as fh:
        fh.write("eps,diff,status,iterations\n")
        for r in rows:
            fh.write(f"{r['eps']:.17g},{r['diff']:.17g},{r['status']},{r['iterations']}\n")
    write_json(outdir / "sweep.json", {"rows": rows, "slope": slope})
    return EXIT_OK if all(r["status"] == "converged" for r in rows) else EXIT_DIVERGED


MODES = {"solve-linear": run_solve_linear, "solve": run_solve, "verify": run_verify, "sweep": run_sweep}


def run(mode: str, config_path, out=None, seed=None) -> int:
    try:
        cfg = load_config(config_path)
        if seed is not None:
            cfg = with_seed(cfg, seed)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    outdir = Path(out) if out is not None else cfg.output_dir
    try:
        return MODES[mode](cfg, outdir)
    except (ConfigError, CompatibilityError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GradRubinError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (OSError, ValueError, KeyError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gradrubin", description="Grad-Rubin equilibria on a periodic channel.")
    ap.add_argument("--mode", required=True, choices=sorted(MODES))
    ap.add_argument("--config", required=True, type=Path)
    ap.add_argument("--out", type=Path, default=None, help="output directory (overrides [output] dir)")
    ap.add_argument("--seed", type=int, default=None, help="seed of the random pair sample in the Hoelder monitor")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    return run(args.mode, args.config, args.out, args.seed)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
