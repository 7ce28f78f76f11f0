"""Kernel selection: the compiled extension when importable, otherwise the
numpy/Python reference.  Set CUBEFORMS_PURE_PYTHON=1 to force the latter."""

import os

from . import _kernels_py

kernels = _kernels_py
if os.environ.get("CUBEFORMS_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _kernels as kernels  # noqa: F811
    except ImportError:
        pass

COMPILED = kernels.COMPILED
reference = _kernels_py
