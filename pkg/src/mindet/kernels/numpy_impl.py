"""Pure-numpy implementations of the hot kernels.

These are the reference implementations; the numba twins in numba_impl.py
must agree with them to machine precision.
"""

import numpy as np


def autocorr_lags(vals, lags, step):
    """A[j] = Σᵢ vals[i]·conj(vals[i − lags[j]])·step  (integer sample lags).

    This is the lattice form of the overlap ∫ g(x)·g*(x − τ) dx that the
    characteristic functions are built from.
    """
    n = len(vals)
    out = np.zeros(len(lags), dtype=complex)
    for j, lag in enumerate(lags):
        k = int(lag)
        if abs(k) >= n:
            continue
        if k >= 0:
            out[j] = np.sum(vals[k:] * np.conj(vals[: n - k])) * step
        else:
            out[j] = np.sum(vals[: n + k] * np.conj(vals[-k:])) * step
    return out


def wigner_lag_rows(w1, w2, row_idx, max_lag, npad):
    """Lag-product matrix G[r, k mod npad] = conj(w1[i−k])·w2[i+k], i = row_idx[r].

    k runs over −max_lag … max_lag−1; out-of-range samples contribute zero.
    A Fourier transform of each row (with alternating lag signs) gives one
    row of the phase-space distribution.
    """
    n = len(w1)
    rows = len(row_idx)
    G = np.zeros((rows, npad), dtype=complex)
    kk = np.arange(-max_lag, max_lag)
    cols = kk % npad
    for r in range(rows):
        i = int(row_idx[r])
        il = i - kk
        ir = i + kk
        ok = (il >= 0) & (il < n) & (ir >= 0) & (ir < n)
        G[r, cols[ok]] = np.conj(w1[il[ok]]) * w2[ir[ok]]
    return G


def direct_dft(vals, xs, ps, hbar, sign):
    """out[m] = Σₙ vals[n]·exp(i·sign·ps[m]·xs[n]/ħ)  (plain, unscaled sum).

    Evaluates a Fourier sum at arbitrary targets, used where the FFT lattice
    is not the grid we want.  Chunked to bound the temporary matrix.
    """
    vals = np.asarray(vals, dtype=complex)
    out = np.empty(len(ps), dtype=complex)
    chunk = max(1, int(4_000_000 // max(len(xs), 1)))
    coef = 1j * sign / hbar
    for s in range(0, len(ps), chunk):
        block = ps[s : s + chunk]
        out[s : s + chunk] = np.exp(coef * np.outer(block, xs)) @ vals
    return out
