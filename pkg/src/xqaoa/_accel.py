"""Numba switch shared by all kernel modules.

Set ``XQAOA_NO_NUMBA=1`` before import to force the pure-numpy paths.
Both implementations of every kernel stay importable so they can be
compared against each other (see ``benchmarks/bench_kernels.py``).
"""
import os

_DISABLED = os.environ.get("XQAOA_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not _DISABLED


def njit(func=None, **kwargs):
    """``numba.njit(cache=True, nogil=True)`` when numba is importable.

    Jitted variants are compiled even when ``USE_NUMBA`` is off so the
    benchmark can still time them; the flag only picks which variant the
    public functions dispatch to.
    """
    opts = {"cache": True, "nogil": True}
    opts.update(kwargs)

    def wrap(f):
        if not HAVE_NUMBA:
            return None
        return numba.njit(**opts)(f)

    if func is not None:
        return wrap(func)
    return wrap


def pick(jit_impl, numpy_impl):
    """Return the implementation selected by the environment flag."""
    if USE_NUMBA and jit_impl is not None:
        return jit_impl
    return numpy_impl


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
