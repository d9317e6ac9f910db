"""Wigner fields, currents, group delay, and the dual construction.

API-level checks run on a reduced lattice (milliseconds); the
canonical-lattice verdicts live in test_experiments / test_acceptance.
"""

import numpy as np
import pytest

from mindet.grids import Grid1D, quadrature
from mindet.wavepacket import (
    WindowSpec,
    SuperpositionSpec,
    build_window,
    build_superposition,
    lobe_waves,
)
from mindet import phasespace as ps
from mindet.spectral import to_momentum

ALPHAS = (0.0, np.pi / 4.0, np.pi / 2.0, np.pi)


def _wave_grid():
    # reduced analogue of the dedicated phase-space lattice
    return Grid1D(-4.0, 1.0 / 64.0, 1024)


def _spec(alpha=0.0, internal_phase=0):
    return SuperpositionSpec(WindowSpec("smooth_bump", 1.0, internal_phase),
                             2.0, 2, alpha=alpha)


def _wave(alpha=0.0):
    return build_superposition(_spec(alpha), _wave_grid())


# ----------------------------------------------------------------- Wigner

def test_wigner_marginals_and_mass():
    w = _wave(0.7)
    wg = ps.wigner(w, x_window=(-0.5, 3.5))
    assert wg.metadata["x_marginal_error"] <= 1e-7
    assert wg.metadata["p_marginal_error"] <= 1e-7
    assert wg.metadata["imag_residue"] <= 1e-12
    assert np.isclose(wg.metadata["mass"], 1.0, atol=1e-9)
    assert wg.values.dtype == np.float64
    assert wg.values.shape == (wg.x_grid.count, wg.p_grid.count)


def test_wigner_takes_negative_values():
    """Interference makes W negative between the lobes — it is a
    quasi-distribution, not a probability density."""
    wg = ps.wigner(_wave(0.0), x_window=(-0.5, 3.5))
    mid = wg.x_grid.index_of(1.5)
    assert wg.values[mid].min() < -0.01


def test_wigner_moment_identities():
    w = _wave(0.9)
    wg = ps.wigner(w, x_window=None)   # full support window
    # ∬W = 1, ∬xW = ⟨x⟩, ∬pW = ⟨p⟩ = 0 for a real window
    assert np.isclose(ps.wigner_moment(wg, 0, 0), 1.0, atol=1e-6)
    x = w.grid.points()
    x_mean = float(np.sum(x * np.abs(w.values) ** 2) * w.grid.step)
    assert np.isclose(ps.wigner_moment(wg, 1, 0), x_mean, atol=1e-6)
    assert np.isclose(ps.wigner_moment(wg, 0, 1), 0.0, atol=1e-6)


def test_mixed_moments_alpha_free():
    """⟨xⁿpᵐ⟩ from the Wigner field is the same for every α."""
    rows = []
    pairs = [(n, m) for n in range(3) for m in range(3) if n + m <= 4 and n + m > 0]
    for alpha in ALPHAS:
        w = _wave(alpha)
        rows.append([ps.mixed_moment(w, n, m) for n, m in pairs])
    rows = np.array(rows)
    spread = rows.max(axis=0) - rows.min(axis=0)
    rel = spread / np.maximum(1.0, np.abs(rows.mean(axis=0)))
    assert np.max(rel) <= 1e-6


def test_mixed_moment_order_limit():
    with pytest.raises(ValueError):
        ps.mixed_moment(_wave(), 3, 2)


def test_wigner_incommensurate_p_grid():
    w = _wave()
    with pytest.raises(ValueError):
        ps.wigner(w, p_grid=Grid1D(-10.0, 0.3, 67))


def test_cross_wigner_hermitian():
    lobes = lobe_waves(_spec(0.0), _wave_grid())
    cw12 = ps.cross_wigner(lobes[0], lobes[1])
    cw21 = ps.cross_wigner(lobes[1], lobes[0])
    assert np.max(np.abs(cw21.values - np.conj(cw12.values))) <= 1e-12


def test_two_lobe_reconstruction():
    """W = ½(W₁ + W₂) + Re e^{iα}W₁₂ pointwise: the cross term carries all
    of the α dependence."""
    alpha = np.pi / 3.0
    xw = (-0.5, 3.5)
    w = build_superposition(_spec(alpha), _wave_grid())
    lobes = lobe_waves(_spec(alpha), _wave_grid())
    wg = ps.wigner(w, x_window=xw)
    w1 = ps.wigner(lobes[0], x_window=xw)
    w2 = ps.wigner(lobes[1], x_window=xw)
    cw = ps.cross_wigner(lobes[0], lobes[1], x_window=xw)
    rebuilt = 0.5 * (w1.values + w2.values) + np.real(np.exp(1j * alpha) * cw.values)
    assert np.max(np.abs(rebuilt - wg.values)) <= 1e-12


def test_disjoint_cross_moments_vanish():
    """∬xⁿpᵐW₁₂ ≈ 0 for non-overlapping lobes — the reason every moment is
    blind to α."""
    lobes = lobe_waves(_spec(0.0), _wave_grid())
    for n, m in ((0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2)):
        mm = ps.cross_mixed_moment(lobes[0], lobes[1], n, m)
        assert abs(mm.value) <= 1e-8
        assert mm.value == mm.derivative
        assert abs(mm.quadrature) <= 1e-6


def test_cross_mixed_moment_nonzero_when_overlapping():
    """Shift the window by only a/2: the overlap integral is visibly nonzero
    and both routes agree on it."""
    from mindet.grids import SampledWave

    g = _wave_grid()
    base = build_window(WindowSpec("smooth_bump", 1.0), g)
    shifted = SampledWave(g, np.roll(base.values, g.index_of(0.5) - g.index_of(0.0)))
    mm = ps.cross_mixed_moment(base, shifted, 0, 0)
    assert abs(mm.value) > 1e-3
    assert np.isclose(mm.quadrature.real, mm.value.real, atol=1e-6)


# ----------------------------------------------------------------- current

def _fine_grid():
    # spectral derivatives of the bump's steep support edges need the full
    # canonical resolution; the coarse lattice leaves ~1e-7 leakage
    return Grid1D(-4.0, 1.0 / 512.0, 8192)


def test_current_vanishes_for_real_wave():
    j = ps.current(build_superposition(_spec(0.0), _fine_grid()))
    assert np.max(np.abs(j)) <= 1e-10


def test_current_linear_phase():
    """ψ = f·e^{ip₀x} carries j = p₀|ψ|²."""
    p0 = 3.0
    w = build_superposition(_spec(0.4, internal_phase=lambda x: p0 * x),
                            _fine_grid())
    j = ps.current(w)
    dens = np.abs(w.values) ** 2
    assert np.max(np.abs(j - p0 * dens)) <= 1e-8


def test_current_is_alpha_free():
    """Disjoint lobes: the cross term of j vanishes with the overlap."""
    chirp = lambda x: 3.0 * x + 1.5 * x * x
    ref = None
    for alpha in ALPHAS:
        w = build_superposition(_spec(alpha, internal_phase=chirp), _fine_grid())
        j = ps.current(w)
        if ref is None:
            ref = j
        else:
            assert np.max(np.abs(j - ref)) <= 1e-8


def test_current_requires_position_axis():
    with pytest.raises(ValueError):
        ps.current(to_momentum(_wave()))


# ------------------------------------------------------------- group delay

def test_group_delay_closed_form():
    """τ(p) = ħ·Im(φ*φ′) equals ħ(2η₁′ − L/ħ)|F|²cos²((pL/ħ − α)/2)."""
    fine = Grid1D(0.0, 1.0 / 4096.0, 4097)
    for alpha in (0.0, np.pi / 2.0):
        w = _wave(alpha)
        phi, tau = ps.group_delay(w)
        p = phi.grid.points()
        sel = np.abs(p) <= 64.0 * np.pi
        FdF = ps.window_transform_with_derivative(WindowSpec("smooth_bump", 1.0),
                                                  p[sel], fine)
        closed = ps.group_delay_closed_form(_spec(alpha), p[sel], FdF, alpha=alpha)
        assert np.max(np.abs(tau[sel] - closed)) <= 1e-8


def test_group_delay_sees_alpha():
    """τ(p; 0) and τ(p; π) differ pointwise by order |F|²·L."""
    _, tau0 = ps.group_delay(_wave(0.0))
    _, taupi = ps.group_delay(_wave(np.pi))
    assert np.max(np.abs(tau0 - taupi)) > 1e-3


def test_window_transform_derivative_is_exact():
    fine = Grid1D(0.0, 1.0 / 4096.0, 4097)
    ws = WindowSpec("smooth_bump", 1.0)
    p = np.array([0.0, 1.0, 5.0, -17.3])
    h = 1e-4
    F, dF = ps.window_transform_with_derivative(ws, p, fine)
    Fp, _ = ps.window_transform_with_derivative(ws, p + h, fine)
    Fm, _ = ps.window_transform_with_derivative(ws, p - h, fine)
    fd = (Fp - Fm) / (2.0 * h)
    assert np.max(np.abs(dF - fd)) <= 1e-6


# ------------------------------------------------------ dual construction

def _dual_p_grid():
    return Grid1D(-8.0, 1.0 / 128.0, 2048)


def test_dual_current_sees_alpha():
    """Momentum-space lobes overlap everywhere in x: j now depends on α."""
    psi0, j0 = ps.dual_current(_spec(0.0), _dual_p_grid())
    _, jpi = ps.dual_current(_spec(np.pi), _dual_p_grid())
    assert np.max(np.abs(j0 - jpi)) > 1e-3
    # and the fringe pattern lives in |ψ(x)|²: 1 + cos(xL − α) modulation
    dens0 = np.abs(psi0.values) ** 2
    x = psi0.grid.points()
    i_max = np.argmax(dens0)
    assert abs(np.cos(x[i_max] * 2.0)) > 0.99   # peak sits on a fringe crest


def test_dual_group_delay_alpha_free():
    """The mirror statement: disjoint momentum lobes make τ(p) α-blind."""
    ref = None
    for alpha in ALPHAS:
        _, tau = ps.dual_group_delay(_spec(alpha), _dual_p_grid())
        if ref is None:
            ref = tau
        else:
            assert np.max(np.abs(tau - ref)) <= 1e-8


def test_dual_special_case_report():
    """Only the derived polar form R²(S₁′ + L/2) tracks the bilinear current;
    the sign variant and the shorthand form do not."""
    rep = ps.dual_special_case_report(_spec(np.pi / 4.0), _dual_p_grid())
    assert rep["max_dev_derived"] <= 1e-6
    assert rep["max_dev_variant"] > 1e-2
    assert rep["max_dev_printed"] > 1e-2
    assert np.max(np.abs(rep["bilinear"] - rep["derived"])) == rep["max_dev_derived"]
