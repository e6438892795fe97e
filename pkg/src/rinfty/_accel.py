"""Switch between numba-compiled kernels and the pure-numpy fallbacks.

Set ``RINFTY_NUMBA=0`` in the environment to force the numpy path.  The
choice is made once, at import time.
"""
from __future__ import annotations

import os

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

USE_NUMBA = _numba is not None and os.environ.get("RINFTY_NUMBA", "1") != "0"


def njit(func):
    """Compile ``func`` with numba (cached) or return it untouched."""
    if _numba is None:
        return func
    return _numba.njit(cache=True, nogil=True)(func)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
