"""Hot numeric kernels, compiled with numba when available.

The backend is chosen once, at import time, from ``GRADRUBIN_BACKEND``
(``numba`` by default, ``numpy`` to force the pure-numpy fallback).  Both
backends expose the same functions with the same signatures.
"""

import os

from gradrubin._kernels import _numpy

BACKEND = os.environ.get("GRADRUBIN_BACKEND", "numba").strip().lower()

if BACKEND == "numba":
    try:
        from gradrubin._kernels import _numba as _impl
    except ImportError:  # numba not installed
        _impl = _numpy
        BACKEND = "numpy"
elif BACKEND == "numpy":
    _impl = _numpy
else:
    raise ImportError(f"unknown GRADRUBIN_BACKEND {BACKEND!r}; use 'numba' or 'numpy'")

trig_eval = _impl.trig_eval
rk4_flow = _impl.rk4_flow
newton_invert = _impl.newton_invert
bracket_sums = _impl.bracket_sums
assemble_matrix = _impl.assemble_matrix

__all__ = [
    "BACKEND",
    "assemble_matrix",
    "bracket_sums",
    "newton_invert",
    "rk4_flow",
    "trig_eval",
]
