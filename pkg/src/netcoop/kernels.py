"""Kernel backend selection.

The compiled extension is used when it imports; set ``NETCOOP_PURE_PYTHON=1``
to force the pure-Python fallback.
"""

import os

from netcoop import _pykernels as python_backend

try:
    if os.environ.get("NETCOOP_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-Python backend requested")
    from netcoop import _kernels as compiled_backend
except ImportError:
    compiled_backend = None

active = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "cython" if compiled_backend is not None else "python"

accumulate_payoffs = active.accumulate_payoffs
imitate = active.imitate
brandes = active.brandes
distance_sums = active.distance_sums
