"""Numba-compiled twins of the numpy kernels (see numpy_impl.py for contracts)."""

import numpy as np
from numba import njit


@njit(cache=True)
def _autocorr_lags(vals, lags, step):
    n = vals.shape[0]
    out = np.zeros(lags.shape[0], dtype=np.complex128)
    for j in range(lags.shape[0]):
        k = lags[j]
        if k >= n or -k >= n:
            continue
        acc = 0.0 + 0.0j
        lo = k if k > 0 else 0
        hi = n if k > 0 else n + k
        for i in range(lo, hi):
            acc += vals[i] * np.conj(vals[i - k])
        out[j] = acc * step
    return out


@njit(cache=True)
def _wigner_lag_rows(w1, w2, row_idx, max_lag, npad):
    n = w1.shape[0]
    rows = row_idx.shape[0]
    G = np.zeros((rows, npad), dtype=np.complex128)
    for r in range(rows):
        i = row_idx[r]
        for kk in range(-max_lag, max_lag):
            il = i - kk
            ir = i + kk
            if 0 <= il < n and 0 <= ir < n:
                G[r, kk % npad] = np.conj(w1[il]) * w2[ir]
    return G


@njit(cache=True)
def _direct_dft(vals, xs, ps, hbar, sign):
    out = np.empty(ps.shape[0], dtype=np.complex128)
    for m in range(ps.shape[0]):
        acc = 0.0 + 0.0j
        w = sign * ps[m] / hbar
        for nn in range(xs.shape[0]):
            acc += vals[nn] * np.exp(1j * (w * xs[nn]))
        out[m] = acc
    return out


def autocorr_lags(vals, lags, step):
    return _autocorr_lags(np.ascontiguousarray(vals, dtype=np.complex128),
                          np.ascontiguousarray(lags, dtype=np.int64),
                          float(step))


def wigner_lag_rows(w1, w2, row_idx, max_lag, npad):
    return _wigner_lag_rows(np.ascontiguousarray(w1, dtype=np.complex128),
                            np.ascontiguousarray(w2, dtype=np.complex128),
                            np.ascontiguousarray(row_idx, dtype=np.int64),
                            int(max_lag), int(npad))


def direct_dft(vals, xs, ps, hbar, sign):
    return _direct_dft(np.ascontiguousarray(vals, dtype=np.complex128),
                       np.ascontiguousarray(xs, dtype=np.float64),
                       np.ascontiguousarray(ps, dtype=np.float64),
                       float(hbar), float(sign))
