"""Backend selection for the hot numerical kernels.

The environment variable MINDET_BACKEND picks the implementation:

    auto   (default) use numba when importable, else fall back to numpy
    numba  require the compiled kernels, error if numba is missing
    numpy  force the pure-numpy reference implementations

Both backends expose the same three functions and agree to machine
precision; see benchmarks/bench_kernels.py for the speed comparison.
"""

import os

from . import numpy_impl


def backend_choice():
    """Validated value of MINDET_BACKEND ("auto", "numba", or "numpy").

    Cheap to call: reads the environment without importing any backend.
    """
    choice = os.environ.get("MINDET_BACKEND", "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(f"MINDET_BACKEND must be auto, numba, or numpy (got {choice!r})")
    return choice


def _select():
    choice = backend_choice()
    if choice == "numpy":
        return numpy_impl, "numpy"
    try:
        from . import numba_impl
        return numba_impl, "numba"
    except ImportError:
        if choice == "numba":
            raise RuntimeError("MINDET_BACKEND=numba but numba is not installed")
        return numpy_impl, "numpy"


_selected = None


def _impl():
    """Resolve the backend on first use so a bad MINDET_BACKEND value is a
    clean runtime error, not an import-time crash."""
    global _selected
    if _selected is None:
        _selected = _select()
    return _selected[0]


def autocorr_lags(values, lags, step):
    return _impl().autocorr_lags(values, lags, step)


def wigner_lag_rows(w1, w2, row_idx, max_lag, npad):
    return _impl().wigner_lag_rows(w1, w2, row_idx, max_lag, npad)


def direct_dft(values, xs, ps, hbar, sign):
    return _impl().direct_dft(values, xs, ps, hbar, sign)


def active_backend():
    """Name of the kernel backend in use ("numba" or "numpy")."""
    _impl()
    return _selected[1]
