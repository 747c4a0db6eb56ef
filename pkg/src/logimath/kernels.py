"""Backend selection for the hot loops.

The compiled extension is used when it was built; otherwise, or when
``LOGIMATH_PURE_PYTHON=1`` is set, the pure-Python twin is loaded. Callers
import ``tricomi_series`` and ``laguerre_cn`` from here and never care which
one they got.
"""

import os

from . import _kernels_py

if os.environ.get("LOGIMATH_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "cython" if _impl is not _kernels_py else "python"

tricomi_series = _impl.tricomi_series
laguerre_cn = _impl.laguerre_cn


def get_backend(name):
    """Return the kernel module for ``"cython"`` or ``"python"``."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown backend {name!r}")
