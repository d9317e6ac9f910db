"""Benchmark the hot kernels: numba JIT vs pure numpy.

Runs each kernel at the sizes the canonical experiments actually use
(windowed autocorrelation for characteristic functions, lag-product rows
for the phase-space transform, direct Fourier sums at off-lattice targets),
checks the two backends agree, and reports wall-clock medians.

    python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from mindet.kernels import numpy_impl

try:
    from mindet.kernels import numba_impl
    HAVE_NUMBA = True
except ImportError:
    numba_impl = None
    HAVE_NUMBA = False


def bench(func, *args, n_runs=5):
    """Median wall time over n_runs (plus min/max), first result."""
    times = []
    result = None
    for _ in range(n_runs):
        t0 = time.perf_counter()
        result = func(*args)
        times.append(time.perf_counter() - t0)
    return float(np.median(times)), min(times), max(times), result


def report(label, med_np, med_nb):
    print(f"{label}:")
    print(f"  numpy: {med_np * 1e3:9.3f} ms")
    if med_nb is None:
        print("  numba:   (not available)")
    else:
        print(f"  numba: {med_nb * 1e3:9.3f} ms   "
              f"speedup {med_np / med_nb:5.2f}x")
    print()


def main():
    rng = np.random.default_rng(20260814)
    print("=" * 64)
    print("kernel benchmark: numba vs numpy")
    print(f"numba available: {HAVE_NUMBA}")
    print("=" * 64)
    print()

    # representative inputs ------------------------------------------------
    # autocorrelation: window sampled at the canonical lattice density
    # (a = 1 at dx = 1/512 -> 513 samples; theta lattice of ~129 lags)
    n_w = 513
    w = rng.standard_normal(n_w) + 1j * rng.standard_normal(n_w)
    lags = np.arange(-64, 65) * 8
    step = 1.0 / 512.0

    # phase-space rows: wave on 4096 points, 1024 output rows
    n_x = 4096
    psi1 = rng.standard_normal(n_x) + 1j * rng.standard_normal(n_x)
    psi2 = rng.standard_normal(n_x) + 1j * rng.standard_normal(n_x)
    row_idx = np.arange(896, 896 + 1024, dtype=np.int64)
    max_lag = n_x // 2 + 2
    npad = 8192

    # direct Fourier sum: 4097 support samples at 2048 momentum targets
    xs = np.linspace(0.0, 1.0, 4097)
    f = rng.standard_normal(4097) + 1j * rng.standard_normal(4097)
    ps = np.linspace(-200.0, 200.0, 2048)

    if HAVE_NUMBA:
        # warm up the JIT so compile time is not measured
        print("warming up JIT...")
        numba_impl.autocorr_lags(w, lags[:3], step)
        numba_impl.wigner_lag_rows(psi1, psi2, row_idx[:2], 8, 32)
        numba_impl.direct_dft(f[:16], xs[:16], ps[:4], 1.0, -1)
        print("warmup complete.\n")

    # autocorrelation ------------------------------------------------------
    med_np, _, _, a_np = bench(numpy_impl.autocorr_lags, w, lags, step)
    med_nb = None
    if HAVE_NUMBA:
        med_nb, _, _, a_nb = bench(numba_impl.autocorr_lags, w, lags, step)
        assert np.allclose(a_np, a_nb, atol=1e-12), "backends disagree"
    report(f"autocorr_lags (n={n_w}, {len(lags)} lags)", med_np, med_nb)

    # phase-space lag rows -------------------------------------------------
    med_np, _, _, g_np = bench(numpy_impl.wigner_lag_rows,
                               psi1, psi2, row_idx, max_lag, npad, n_runs=3)
    med_nb = None
    if HAVE_NUMBA:
        med_nb, _, _, g_nb = bench(numba_impl.wigner_lag_rows,
                                   psi1, psi2, row_idx, max_lag, npad,
                                   n_runs=3)
        assert np.allclose(g_np, g_nb, atol=1e-12), "backends disagree"
    report(f"wigner_lag_rows ({len(row_idx)} rows x {npad} pad)",
           med_np, med_nb)

    # direct Fourier sum ---------------------------------------------------
    med_np, _, _, d_np = bench(numpy_impl.direct_dft, f, xs, ps, 1.0, -1,
                               n_runs=3)
    med_nb = None
    if HAVE_NUMBA:
        med_nb, _, _, d_nb = bench(numba_impl.direct_dft, f, xs, ps, 1.0, -1,
                                   n_runs=3)
        assert np.allclose(d_np, d_nb, atol=1e-9 * np.abs(d_np).max()), \
            "backends disagree"
    report(f"direct_dft ({len(xs)} samples -> {len(ps)} targets)",
           med_np, med_nb)

    print("=" * 64)
    print("numbers are medians of repeated runs; JIT compile time excluded.")
    print("=" * 64)


if __name__ == "__main__":
    main()
