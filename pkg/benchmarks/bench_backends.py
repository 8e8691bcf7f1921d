"""Time the numba kernels against the numpy fallback.

Each backend runs in its own interpreter because the choice is fixed at
import time.  Usage: ``python3 benchmarks/bench_backends.py [--repeat N]``.
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
import gradrubin._kernels as k
from gradrubin import BoundaryData, SolverConfig, gamma_step
from gradrubin.linear import solve_linearized

repeat = int(sys.argv[1])
cfg = SolverConfig(Nx=64, Ny=129)
g = cfg.grid
x = g.x
bd = BoundaryData(0.02 * np.cos(x), 0.02 * np.cos(x + 0.4), 0.02 * np.sin(x))
lin = solve_linearized(bd, g)
rng = np.random.default_rng(0)
M = g.Nx // 2 + 1
c = (rng.normal(size=(2, M)) + 1j * rng.normal(size=(2, M))) * 0.01
pts = rng.uniform(0, 2 * np.pi, 4096)
Lam = 0.05 * rng.normal(size=(g.Nx, g.Ny))
DX = 1 + 0.05 * rng.normal(size=(g.Nx, g.Ny))
w = rng.normal(size=(M, g.Ny))
nvals = np.arange(M, dtype=float)
a = rng.normal(size=(M, g.Nx)) + 1j * rng.normal(size=(M, g.Nx))

cases = {
    "trig_eval": lambda: k.trig_eval(c, pts),
    "bracket_sums": lambda: k.bracket_sums(Lam, DX, nvals, w),
    "assemble_matrix": lambda: k.assemble_matrix(a, x, x, g.Nx),
    "gamma_step": lambda: gamma_step(lin.W, bd, g, cfg),
}
out = {"backend": k.BACKEND}
for name, fn in cases.items():
    fn()  # warm-up, includes compilation
    t = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        t.append(time.perf_counter() - t0)
    out[name] = min(t)
print(json.dumps(out))
"""


def run(backend: str, repeat: int) -> dict:
    env = dict(os.environ, GRADRUBIN_BACKEND=backend)
    r = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env, capture_output=True, text=True, check=True)
    return json.loads(r.stdout.strip().splitlines()[-1])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    res = {b: run(b, args.repeat) for b in ("numpy", "numba")}
    if res["numba"]["backend"] != "numba":
        print("numba is not installed; only the numpy timings are meaningful")
    print(f"{'case':<16}{'numpy [ms]':>12}{'numba [ms]':>12}{'speed-up':>10}")
    for name in ("trig_eval", "bracket_sums", "assemble_matrix", "gamma_step"):
        tn, tb = res["numpy"][name], res["numba"][name]
        print(f"{name:<16}{1e3 * tn:>12.2f}{1e3 * tb:>12.2f}{tn / tb:>10.1f}")


if __name__ == "__main__":
    main()
