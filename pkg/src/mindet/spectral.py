"""Unitary position↔momentum transforms and characteristic functions.

The transforms realize the continuum kernels

    φ(p) = (1/√(2πħ)) ∫ ψ(x) e^{−ipx/ħ} dx ,
    ψ(x) = (1/√(2πħ)) ∫ φ(p) e^{+ipx/ħ} dp ,

on uniform grids via the FFT with explicit origin phase factors, so no DFT
index convention leaks into results.  The conjugate grid satisfies
dp·dx = 2πħ/n; a transformed wave remembers the source-grid origin
("conjugate_origin"), which makes round trips grid-exact.

Characteristic functions M(θ) = ⟨e^{iθp}⟩ are computed two independent ways:
from a sampled density by quadrature, and for window superpositions from the
position-space overlap

    M_F(θ) = ∫ f(x) f*(x − θħ) dx ,

which vanishes *identically* for |θ| > a/ħ — the support structure that makes
every moment phase-blind while the distribution is not.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .grids import Grid1D, SampledWave, Distribution1D, decay_fraction
from .wavepacket import build_window, build_superposition

TWO_PI = 2.0 * np.pi


def _conjugate_grid(grid, hbar, stored_origin=None):
    n = grid.count
    step = TWO_PI * hbar / (n * grid.step)
    origin = stored_origin if stored_origin is not None else -(n // 2) * step
    return Grid1D(origin, step, n)


def to_momentum(w):
    """φ(p) on the conjugate grid; unitary up to roundoff.

    Adds the warning "momentum grid truncates tail" when |φ| at the grid
    edges has not decayed below 10⁻⁶ (finite-extent ψ always truncates
    somewhere; this flags when it is visible).
    """
    if w.axis_kind != "position":
        raise ValueError("to_momentum expects a position-axis wave")
    n, dx, hbar = w.grid.count, w.grid.step, w.hbar
    pgrid = _conjugate_grid(w.grid, hbar, w.metadata.get("conjugate_origin"))
    x = w.grid.points()
    p = pgrid.points()
    pre = np.exp(-1j * pgrid.origin * (x - w.grid.origin) / hbar)
    post = np.exp(-1j * p * w.grid.origin / hbar)
    vals = (dx / np.sqrt(TWO_PI * hbar)) * post * np.fft.fft(w.values * pre)
    meta = {"conjugate_origin": w.grid.origin, "source": dict(w.metadata)}
    out = SampledWave(pgrid, vals, hbar=hbar, axis_kind="momentum", metadata=meta)
    out.metadata["norm_ratio"] = out.norm2() / w.norm2() if w.norm2() > 0 else 1.0
    edge = decay_fraction(out.values)
    if edge >= 1e-6:
        out.add_warning(f"momentum grid truncates tail (|phi| reaches {edge:.3e} at the edge)")
    return out


def to_position(w):
    """ψ(x) on the conjugate grid; exact inverse of to_momentum."""
    if w.axis_kind != "momentum":
        raise ValueError("to_position expects a momentum-axis wave")
    n, dp, hbar = w.grid.count, w.grid.step, w.hbar
    xgrid = _conjugate_grid(w.grid, hbar, w.metadata.get("conjugate_origin"))
    p = w.grid.points()
    x = xgrid.points()
    pre = np.exp(1j * (p - w.grid.origin) * xgrid.origin / hbar)
    post = np.exp(1j * w.grid.origin * x / hbar)
    vals = (dp * n / np.sqrt(TWO_PI * hbar)) * post * np.fft.ifft(w.values * pre)
    meta = {"conjugate_origin": w.grid.origin, "source": dict(w.metadata)}
    out = SampledWave(xgrid, vals, hbar=hbar, axis_kind="position", metadata=meta)
    out.metadata["norm_ratio"] = out.norm2() / w.norm2() if w.norm2() > 0 else 1.0
    edge = decay_fraction(out.values)
    if edge >= 1e-6:
        out.add_warning(f"position grid truncates tail (|psi| reaches {edge:.3e} at the edge)")
    return out


def dirichlet_kernel_sq(chi, lobes):
    """|Σₙ e^{inχ}|² = sin²(Nχ/2)/sin²(χ/2), with the removable singularity
    at χ ≡ 0 (mod 2π) evaluated by its limit N²."""
    chi = np.asarray(chi, dtype=float)
    half = 0.5 * chi
    s = np.sin(half)
    out = np.empty_like(chi)
    singular = np.abs(s) < 1e-8
    ok = ~singular
    out[ok] = (np.sin(lobes * half[ok]) / s[ok]) ** 2
    out[singular] = float(lobes) ** 2
    return out


def window_transform(window_spec, p, grid, hbar=1.0):
    """F(p) = (1/√(2πħ)) ∫ f(x) e^{−ipx/ħ} dx at arbitrary targets p,
    by direct Riemann sum over the window's support samples."""
    f = build_window(window_spec, grid, hbar=hbar)
    mask = np.abs(f.values) > 0
    xs = grid.points()[mask]
    return (grid.step / np.sqrt(TWO_PI * hbar)) * kernels.direct_dft(
        f.values[mask], xs, np.asarray(p, dtype=float), hbar, -1.0)


def fringe_factor(spec, p, hbar=1.0):
    """|Σₙ e^{iαₙ} e^{−inpL/ħ}|² / N — the lobe-interference factor.

    For linear phases αₙ = n·α this is the closed kernel
    dirichlet_kernel_sq(α − pL/ħ, N)/N; for N = 2 it reduces to
    1 + cos(pL/ħ − α).
    """
    p = np.asarray(p, dtype=float)
    phases = spec.phase_list()
    N = spec.lobes
    if spec.phase_mode == "linear" or N == 2:
        alpha = phases[1] - phases[0]
        chi = alpha - p * spec.shift / hbar
        return dirichlet_kernel_sq(chi, N) / N
    acc = np.zeros(len(p), dtype=complex)
    for n_lobe in range(N):
        acc += np.exp(1j * (phases[n_lobe] - n_lobe * p * spec.shift / hbar))
    return np.abs(acc) ** 2 / N


def momentum_distribution(spec, grid, hbar=1.0, p_max=None):
    """P(p) for a lobe superposition, computed two independent ways.

    Pipeline route: |to_momentum(build_superposition)|².  Closed route:
    |F(p)|² · fringe_factor(p).  Both are evaluated on the transform's p
    lattice (cropped to ±p_max) and the maximum relative discrepancy is
    recorded in metadata["route_discrepancy"].  The lattice must resolve the
    fringe with ≥ 16 samples per period 2πħ/L.
    """
    psi = build_superposition(spec, grid, hbar=hbar)
    phi = to_momentum(psi)
    p_all = phi.grid.points()
    if p_max is None:
        p_max = 64.0 * np.pi * hbar / spec.window.extent
    p_max = min(p_max, -phi.grid.origin)
    lo = phi.grid.index_of(_snap(phi.grid, -p_max))
    hi = phi.grid.index_of(_snap(phi.grid, p_max))
    sel = slice(lo, hi + 1)
    pgrid = Grid1D(p_all[lo], phi.grid.step, hi - lo + 1)

    pipeline = np.abs(phi.values[sel]) ** 2
    closed = (np.abs(window_transform(spec.window, p_all[sel], grid, hbar)) ** 2
              * fringe_factor(spec, p_all[sel], hbar))
    scale = closed.max()
    disc = float(np.max(np.abs(pipeline - closed)) / scale) if scale > 0 else 0.0

    meta = {
        "alpha_phases": tuple(float(v) for v in spec.phase_list()),
        "route_discrepancy": disc,
        "warnings": list(phi.metadata.get("warnings", [])),
    }
    period_samples = (TWO_PI * hbar / spec.shift) / pgrid.step
    if period_samples < 16.0:
        meta.setdefault("warnings", []).append(
            f"momentum grid undersamples the fringe ({period_samples:.1f} samples per period)")
    return Distribution1D(pgrid, closed, metadata=meta)


def _snap(grid, x):
    """Nearest lattice point of `grid` to x."""
    return grid.point(int(round((x - grid.origin) / grid.step)))


@dataclass
class CharFunction:
    """M(θ) = ⟨e^{iθp}⟩ sampled on a θ grid.

    support_radius is the exact radius beyond which M vanishes identically
    (np.inf when unbounded).
    """

    grid: Grid1D
    values: np.ndarray
    support_radius: float = np.inf

    def __call__(self, theta):
        i = self.grid.index_of(theta)
        return complex(self.values[i])


def validate_char_function(cf, normalized=True):
    """Invariant report: M(0) = 1, |M| ≤ 1, Hermitian symmetry M(−θ) = M(θ)*."""
    report = {}
    try:
        i0 = cf.grid.index_of(0.0)
        report["m0_error"] = abs(cf.values[i0] - 1.0) if normalized else 0.0
    except ValueError:
        report["m0_error"] = None
    report["max_modulus_excess"] = float(max(0.0, np.max(np.abs(cf.values)) - 1.0))
    th = cf.grid.points()
    herm = 0.0
    for j, t in enumerate(th):
        if th[0] - 1e-12 <= -t <= th[-1] + 1e-12:
            try:
                k = cf.grid.index_of(-t)
            except ValueError:
                continue
            herm = max(herm, abs(cf.values[j] - np.conj(cf.values[k])))
    report["hermitian_error"] = float(herm)
    return report


def _window_support_samples(window_spec, hbar, theta_step, min_samples=4096):
    """Sample the window on a lattice commensurate with the θ lattice.

    Returns (values, dx, m) with m = θ_step·ħ/dx an exact integer, so every
    θ lattice point maps to an integer sample lag.
    """
    a = window_spec.extent
    m = max(1, int(np.ceil(min_samples * theta_step * hbar / a)))
    dx = theta_step * hbar / m
    count = int(round(a / dx)) + 1
    gw = Grid1D(0.0, dx, count)
    if abs(gw.last - a) > 1e-9 * max(1.0, a):
        count += 1
        gw = Grid1D(0.0, dx, count)
    f = build_window(window_spec, gw, hbar=hbar)
    return f.values, dx, m


def char_function_window(window_spec, theta_grid, hbar=1.0):
    """M_F(θ) = ∫ f(x) f*(x − θħ) dx by integer-lag autocorrelation.

    Exactly zero for |θ| > a/ħ: no approximation can reintroduce tail mass,
    which is what the moment-cancellation mechanism rests on.
    """
    vals, dx, m = _window_support_samples(window_spec, hbar, theta_grid.step)
    th = theta_grid.points()
    ratio = th * hbar / dx
    lags = np.round(ratio).astype(np.int64)
    if np.max(np.abs(ratio - lags)) > 1e-6:
        raise ValueError("theta grid is not commensurate with the window sampling")
    mf = kernels.autocorr_lags(vals, lags, dx)
    return CharFunction(theta_grid, mf, support_radius=window_spec.extent / hbar)


def char_function_superposition(spec, theta_grid, hbar=1.0):
    """Characteristic function of the N-lobe momentum distribution, assembled
    from shifted copies of the window overlap:

        M(θ) = M_F(θ) + (1/N) Σ_{n≠k} e^{iα(n−k)} M_F(θ − L(n−k)/ħ)

    (for N = 2: M_F(θ) + ½e^{−iα}M_F(θ + L/ħ) + ½e^{iα}M_F(θ − L/ħ)).
    Support is contained in |θ| ≤ (a + (N−1)L)/ħ — disjoint islands, so
    every θ-derivative at 0 sees only the phase-free central island.
    """
    if spec.phase_mode != "linear" and spec.lobes != 2:
        raise ValueError("assembled characteristic function needs linear phases for N > 2")
    phases = spec.phase_list()
    alpha = phases[1] - phases[0]
    N = spec.lobes
    vals, dx, m = _window_support_samples(spec.window, hbar, theta_grid.step)
    th = theta_grid.points()

    def mf_at(offsets):
        ratio = offsets * hbar / dx
        lags = np.round(ratio).astype(np.int64)
        if np.max(np.abs(ratio - lags)) > 1e-6:
            raise ValueError("theta grid is not commensurate with the window sampling")
        return kernels.autocorr_lags(vals, lags, dx)

    total = mf_at(th).astype(complex)
    for d in range(1, N):
        weight = (N - d) / N
        total += weight * np.exp(1j * alpha * d) * mf_at(th - d * spec.shift / hbar)
        total += weight * np.exp(-1j * alpha * d) * mf_at(th + d * spec.shift / hbar)
    radius = (spec.window.extent + (N - 1) * spec.shift) / hbar
    return CharFunction(theta_grid, total, support_radius=radius)


def char_function_of_distribution(dist, theta_grid):
    """M(θ) = ∫ e^{iθp} P(p) dp by trapezoid quadrature at each θ."""
    p = dist.grid.points()
    w = np.ones(dist.grid.count)
    w[0] = w[-1] = 0.5
    vals = kernels.direct_dft(w * dist.density, p, theta_grid.points(), 1.0, +1.0)
    return CharFunction(theta_grid, vals * dist.grid.step, support_radius=np.inf)
