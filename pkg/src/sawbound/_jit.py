"""Optional numba compilation.

Set ``SAWBOUND_DISABLE_JIT=1`` before import to run every kernel as plain
Python over numpy arrays. The flag is read once, at import time.
"""

import os

try:
    from numba import njit as _njit
    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover
    NUMBA_AVAILABLE = False

JIT_DISABLED = os.environ.get("SAWBOUND_DISABLE_JIT", "").strip().lower() in ("1", "true", "yes")
USE_JIT = NUMBA_AVAILABLE and not JIT_DISABLED


def optional_njit(*args, **kwargs):
    def decorator(func):
        if USE_JIT:
            return _njit(*args, **kwargs)(func)
        return func
    return decorator


def python_impl(func):
    """Return the uncompiled Python function behind a (possibly) jitted kernel."""
    return getattr(func, "py_func", func)
