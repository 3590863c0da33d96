"""Optional numba acceleration.

Kernels are written once as plain Python over indexable sequences. When numba
is importable and ``BONDEDKNOTS_NO_NUMBA`` is unset (or ``0``), they are
compiled with ``njit``; otherwise the interpreted version runs on Python lists.
"""

from __future__ import annotations

import os

try:  # pragma: no cover - exercised implicitly by the environment
    import numba as _numba
except ImportError:  # pragma: no cover
    _numba = None

USE_NUMBA: bool = _numba is not None and os.environ.get("BONDEDKNOTS_NO_NUMBA", "0") in ("", "0")


def njit(func):
    """Compile ``func`` with numba when enabled, else return it unchanged."""
    if USE_NUMBA:
        return _numba.njit(cache=True, nogil=True)(func)
    return func


def backend() -> str:
    return "numba" if USE_NUMBA else "python"
