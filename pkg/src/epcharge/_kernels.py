"""Backend selection for the RK4 stepping kernels.

The compiled extension is preferred when it imported cleanly; the
pure-Python twin is the fallback.  Set the environment variable
``EPCHARGE_PURE_PYTHON=1`` to force the fallback (used by the benchmark
and for debugging).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("EPCHARGE_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

rk4_reduced = _impl.rk4_reduced
rk4_full = _impl.rk4_full
