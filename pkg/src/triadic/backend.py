"""Select the kernel implementation at import time.

The compiled extension ``triadic._kernels`` is used when it can be imported;
otherwise the numpy fallback in ``triadic._pykernels`` is used.  Setting the
environment variable ``TRIADIC_BACKEND`` to ``python`` or ``compiled`` forces
a choice (``compiled`` raises if the extension is missing).
"""
from __future__ import annotations

import os

from . import _pykernels as python_kernels

try:
    from . import _kernels as compiled_kernels
except ImportError:  # extension not built
    compiled_kernels = None

_choice = os.environ.get("TRIADIC_BACKEND", "").strip().lower()
if _choice == "python":
    kernels = python_kernels
elif _choice == "compiled":
    if compiled_kernels is None:
        raise ImportError("TRIADIC_BACKEND=compiled but triadic._kernels is not built")
    kernels = compiled_kernels
elif _choice in ("", "auto"):
    kernels = compiled_kernels if compiled_kernels is not None else python_kernels
else:
    raise ImportError(f"unknown TRIADIC_BACKEND value {_choice!r}")

BACKEND = "compiled" if kernels is compiled_kernels else "python"

rhs_into = kernels.rhs_into
rk4_steps = kernels.rk4_steps
count_violations = kernels.count_violations

# kind / flag / flavor codes shared by both implementations
SYMMETRIC_COSINE = python_kernels.SYMMETRIC_COSINE
ANTISYMMETRIC_SINE = python_kernels.ANTISYMMETRIC_SINE
KURAMOTO_CLOSURE = python_kernels.KURAMOTO_CLOSURE
CONSENSUS_VARIANCE = python_kernels.CONSENSUS_VARIANCE
FLAG_FREEZE_DEGENERATE = python_kernels.FLAG_FREEZE_DEGENERATE
FLAG_SCAN_ALL_SLICES = python_kernels.FLAG_SCAN_ALL_SLICES
UNORIENTED = python_kernels.UNORIENTED
ORIENTED = python_kernels.ORIENTED
SEMISIMPLICIAL = python_kernels.SEMISIMPLICIAL
