"""Optional numba acceleration.

Hot kernels are written in the numba-compatible subset of Python and wrapped
with :func:`njit`.  Setting ``SLOWBOND_DISABLE_NUMBA=1`` (or running without
numba installed) turns the decorator into a no-op; modules that have a
vectorised numpy counterpart consult :data:`USE_NUMBA` to pick it instead of
running the kernel as interpreted Python.
"""

from __future__ import annotations

import os

_flag = os.environ.get("SLOWBOND_DISABLE_NUMBA", "").strip().lower()
_disabled = _flag not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError
    import numba as _numba
except ImportError:  # pragma: no cover - depends on environment
    _numba = None

USE_NUMBA = _numba is not None


def njit(*args, **kwargs):
    """``numba.njit`` when acceleration is on, identity otherwise."""
    if USE_NUMBA:
        kwargs.setdefault("cache", True)
        return _numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
