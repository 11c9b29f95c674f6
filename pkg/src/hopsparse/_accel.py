"""Numba switch.

Setting ``HOPSPARSE_DISABLE_NUMBA=1`` (or running without numba installed)
routes every kernel to its pure-numpy twin.  The flag is read once at import.
"""
import os

_flag = os.environ.get("HOPSPARSE_DISABLE_NUMBA", "").strip().lower()
DISABLED = _flag not in ("", "0", "false", "no")

try:
    if DISABLED:
        raise ImportError
    from numba import njit as _njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise."""
    if HAS_NUMBA:
        return _njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn
