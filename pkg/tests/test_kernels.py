"""Kernel backends: numba and numpy must agree; the env switch is validated."""

import numpy as np
import pytest

from mindet.kernels import (
    active_backend,
    autocorr_lags,
    backend_choice,
    direct_dft,
    wigner_lag_rows,
)
from mindet.kernels import numpy_impl

try:
    from mindet.kernels import numba_impl
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

RNG = np.random.default_rng(7)


def _wave(n):
    return RNG.standard_normal(n) + 1j * RNG.standard_normal(n)


def test_active_backend_name():
    assert active_backend() in ("numba", "numpy")


def test_backend_choice_env(monkeypatch):
    monkeypatch.delenv("MINDET_BACKEND", raising=False)
    assert backend_choice() == "auto"
    monkeypatch.setenv("MINDET_BACKEND", "NumPy ")
    assert backend_choice() == "numpy"
    monkeypatch.setenv("MINDET_BACKEND", "cuda")
    with pytest.raises(ValueError, match="MINDET_BACKEND"):
        backend_choice()


def test_autocorr_lags_reference():
    """Numpy kernel against a literal translation of the definition."""
    vals = _wave(64)
    lags = np.array([-70, -5, 0, 3, 63, 64], dtype=np.int64)
    got = numpy_impl.autocorr_lags(vals, lags, 0.5)
    for j, lag in enumerate(lags):
        want = 0.0
        for i in range(64):
            if 0 <= i - lag < 64:
                want += vals[i] * np.conj(vals[i - lag])
        want *= 0.5
        assert abs(got[j] - want) <= 1e-12 * max(1.0, abs(want))
    # |lag| >= n contributes exactly zero
    assert got[0] == 0.0
    assert got[5] == 0.0


def test_autocorr_zero_lag_is_norm():
    vals = _wave(128)
    got = numpy_impl.autocorr_lags(vals, np.array([0], dtype=np.int64), 0.25)
    assert np.isclose(got[0], np.sum(np.abs(vals) ** 2) * 0.25)


def test_direct_dft_reference():
    vals = _wave(33)
    xs = np.linspace(-2.0, 2.0, 33)
    ps = np.array([-3.0, 0.0, 0.7, 11.0])
    for sign in (-1.0, 1.0):
        got = numpy_impl.direct_dft(vals, xs, ps, 2.0, sign)
        want = np.array([np.sum(vals * np.exp(1j * sign * p * xs / 2.0))
                         for p in ps])
        assert np.max(np.abs(got - want)) <= 1e-12


def test_wigner_lag_rows_reference():
    w1 = _wave(32)
    w2 = _wave(32)
    rows = np.array([0, 7, 31], dtype=np.int64)
    max_lag, npad = 8, 64
    G = numpy_impl.wigner_lag_rows(w1, w2, rows, max_lag, npad)
    assert G.shape == (3, npad)
    for r, i in enumerate(rows):
        for k in range(-max_lag, max_lag):
            il, ir = i - k, i + k
            want = (np.conj(w1[il]) * w2[ir]
                    if 0 <= il < 32 and 0 <= ir < 32 else 0.0)
            assert abs(G[r, k % npad] - want) <= 1e-14


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
def test_backends_agree():
    """The accelerated kernels must reproduce the reference bit-for-bit at
    double precision."""
    vals = _wave(256)
    lags = np.arange(-300, 300, 7, dtype=np.int64)
    a_np = numpy_impl.autocorr_lags(vals, lags, 1.0 / 512.0)
    a_nb = numba_impl.autocorr_lags(vals, lags, 1.0 / 512.0)
    assert np.max(np.abs(a_np - a_nb)) <= 1e-13 * np.max(np.abs(a_np))

    w1, w2 = _wave(128), _wave(128)
    rows = np.arange(0, 128, 5, dtype=np.int64)
    g_np = numpy_impl.wigner_lag_rows(w1, w2, rows, 20, 256)
    g_nb = numba_impl.wigner_lag_rows(w1, w2, rows, 20, 256)
    assert np.max(np.abs(g_np - g_nb)) <= 1e-13

    xs = np.linspace(0.0, 1.0, 200)
    ps = np.linspace(-40.0, 40.0, 101)
    vals = _wave(200)
    d_np = numpy_impl.direct_dft(vals, xs, ps, 1.0, -1.0)
    d_nb = numba_impl.direct_dft(vals, xs, ps, 1.0, -1.0)
    assert np.max(np.abs(d_np - d_nb)) <= 1e-10 * np.max(np.abs(d_np))


def test_dispatcher_matches_selected_backend():
    """The lazy module-level wrappers route to the selected implementation."""
    vals = _wave(64)
    lags = np.array([0, 5], dtype=np.int64)
    got = autocorr_lags(vals, lags, 0.5)
    ref = numpy_impl.autocorr_lags(vals, lags, 0.5)
    assert np.max(np.abs(got - ref)) <= 1e-12 * max(1.0, np.max(np.abs(ref)))

    xs = np.linspace(0.0, 1.0, 64)
    ps = np.array([0.0, 2.0])
    got = direct_dft(vals, xs, ps, 1.0, 1.0)
    ref = numpy_impl.direct_dft(vals, xs, ps, 1.0, 1.0)
    assert np.max(np.abs(got - ref)) <= 1e-10 * max(1.0, np.max(np.abs(ref)))

    G = wigner_lag_rows(vals, vals, np.array([3], dtype=np.int64), 4, 16)
    ref = numpy_impl.wigner_lag_rows(vals, vals, np.array([3], dtype=np.int64), 4, 16)
    assert np.max(np.abs(G - ref)) <= 1e-13
