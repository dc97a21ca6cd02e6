"""Numba switch.

Set ``ENTWIT_DISABLE_NUMBA=1`` to force the pure-numpy kernels. The flag is
read once at import time; if numba cannot be imported the numpy path is used
regardless.
"""

import os

_FALSY = {"", "0", "false", "no", "off"}

DISABLE_NUMBA = os.environ.get("ENTWIT_DISABLE_NUMBA", "").strip().lower() not in _FALSY

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not DISABLE_NUMBA

numba_default = {
    "nopython": True,
    "nogil": True,
    "cache": True,
    "fastmath": False,
    "error_model": "numpy",
}


def njit(func=None, **overrides):
    """``numba.njit`` with project defaults, or a no-op when numba is off."""
    opts = dict(numba_default, **overrides)

    def wrap(f):
        if not HAVE_NUMBA:
            return f
        return numba.jit(**opts)(f)

    if func is None:
        return wrap
    return wrap(func)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
