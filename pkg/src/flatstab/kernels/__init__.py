"""Kernel selection: compiled Cython Wolfe solver with pure-numpy fallback.

Set ``FLATSTAB_PURE_PYTHON=1`` to force the fallback (used by the benchmark
and the equivalence tests).
"""

import os

from . import wolfe_py

if os.environ.get("FLATSTAB_PURE_PYTHON"):
    wolfe_min_norm = wolfe_py.wolfe_min_norm
    BACKEND = "python"
else:
    try:
        from ._wolfe import wolfe_min_norm

        BACKEND = "cython"
    except ImportError:  # extension not built
        wolfe_min_norm = wolfe_py.wolfe_min_norm
        BACKEND = "python"

__all__ = ["wolfe_min_norm", "BACKEND", "wolfe_py"]
