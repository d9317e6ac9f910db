"""Window families and lobe superpositions."""

import numpy as np
import pytest

from mindet.grids import Grid1D
from mindet.wavepacket import (
    WINDOW_FAMILIES,
    WindowSpec,
    SuperpositionSpec,
    window_envelope,
    build_window,
    build_superposition,
    lobe_waves,
    amplitude_phase,
)

ALPHAS = (0.0, np.pi / 4.0, np.pi / 2.0, np.pi)


@pytest.mark.parametrize("family", sorted(WINDOW_FAMILIES))
def test_envelope_compact_support(family):
    x = np.linspace(-2.0, 3.0, 5001)
    v = window_envelope(family, 1.0, x)
    outside = (x < 0.0) | (x >= 1.0)
    assert np.all(v[outside] == 0.0)   # exact zeros, not just small
    assert np.all(v >= 0.0)
    assert v[np.argmin(np.abs(x - 0.5))] > 0.0


def test_envelope_unknown_family():
    with pytest.raises(ValueError):
        window_envelope("triangle", 1.0, np.linspace(0, 1, 8))


def test_smooth_bump_normalization_pinned(grid):
    # 1/√(∫env²dx) for the a=1 bump on the canonical lattice
    env = window_envelope("smooth_bump", 1.0, grid.points())
    C = 1.0 / np.sqrt(np.sum(env ** 2) * grid.step)
    assert np.isclose(C, 101.5416087137410, rtol=0, atol=1e-9)

    f = build_window(WindowSpec("smooth_bump", 1.0), grid)
    assert np.isclose(f.norm2(), 1.0, rtol=0, atol=1e-12)
    i = grid.index_of(0.5)
    assert np.isclose(abs(f.values[i]), 1.859799437382024, rtol=0, atol=1e-12)
    # peak value is C·e^{−4}
    assert np.isclose(abs(f.values[i]), C * np.exp(-4.0), rtol=1e-13)


def test_rectangle_window_height(grid):
    # unit-normalized rectangle on [0, 1) has height 1
    f = build_window(WindowSpec("rectangle", 1.0), grid)
    i = grid.index_of(0.5)
    assert np.isclose(abs(f.values[i]), 1.0, atol=1e-12)


def test_window_spec_validation():
    with pytest.raises(ValueError):
        WindowSpec("not_a_family", 1.0)
    with pytest.raises(ValueError):
        WindowSpec("smooth_bump", -1.0)


def test_superposition_spec_phases():
    w = WindowSpec("smooth_bump", 1.0)
    s2 = SuperpositionSpec(w, 2.0, 2, alpha=0.7)
    assert np.allclose(s2.phase_list(), [0.0, 0.7])

    s5 = SuperpositionSpec(w, 2.0, 5, alpha=0.3, phase_mode="linear")
    assert np.allclose(s5.phase_list(), 0.3 * np.arange(5))

    explicit = SuperpositionSpec(w, 2.0, 3, phases=(0.0, 0.1, 0.2))
    assert np.allclose(explicit.phase_list(), [0.0, 0.1, 0.2])

    with pytest.raises(ValueError):
        SuperpositionSpec(w, 2.0, 1)
    with pytest.raises(ValueError):
        SuperpositionSpec(w, 2.0, 2, phase_mode="quadratic")
    with pytest.raises(ValueError):
        SuperpositionSpec(w, 2.0, 3).phase_list()   # N>2 needs phases
    with pytest.raises(ValueError):
        SuperpositionSpec(w, 2.0, 3, phases=(0.0, 0.1)).phase_list()


@pytest.mark.parametrize("alpha", ALPHAS)
def test_superposition_unit_norm(grid, alpha):
    spec = SuperpositionSpec(WindowSpec("smooth_bump", 1.0), 2.0, 2, alpha=alpha)
    psi = build_superposition(spec, grid)
    assert np.isclose(psi.norm2(), 1.0, rtol=0, atol=1e-12)


def test_position_density_alpha_free(grid):
    """|ψ(x;α)|² is pointwise identical across α for disjoint lobes."""
    w = WindowSpec("smooth_bump", 1.0)
    ref = None
    for alpha in ALPHAS:
        psi = build_superposition(SuperpositionSpec(w, 2.0, 2, alpha=alpha), grid)
        dens = np.abs(psi.values) ** 2
        if ref is None:
            ref = dens
        else:
            assert np.max(np.abs(dens - ref)) <= 1e-12


def test_lobe_waves_disjoint(grid):
    spec = SuperpositionSpec(WindowSpec("smooth_bump", 1.0), 2.0, 3,
                             alpha=0.4, phase_mode="linear")
    lobes = lobe_waves(spec, grid)
    assert len(lobes) == 3
    x = grid.points()
    for n, lw in enumerate(lobes):
        assert np.isclose(lw.norm2(), 1.0, atol=1e-12)
        support = np.abs(lw.values) > 0
        assert np.all(x[support] > 2.0 * n)
        assert np.all(x[support] < 2.0 * n + 1.0)
    # pairwise products vanish identically: the paradox's support condition
    for i in range(3):
        for j in range(i + 1, 3):
            assert np.max(np.abs(lobes[i].values * lobes[j].values)) == 0.0


def test_superposition_is_phased_lobe_sum(grid):
    spec = SuperpositionSpec(WindowSpec("smooth_bump", 1.0), 2.0, 2,
                             alpha=np.pi / 3.0)
    psi = build_superposition(spec, grid)
    lobes = lobe_waves(spec, grid)
    rebuilt = (lobes[0].values + np.exp(1j * np.pi / 3.0) * lobes[1].values) / np.sqrt(2.0)
    assert np.max(np.abs(psi.values - rebuilt)) <= 1e-14


def test_overlapping_lobes_rejected(grid):
    """L ≤ a would break every disjoint-support identity at once, so the
    builders refuse it."""
    spec = SuperpositionSpec(WindowSpec("smooth_bump", 1.0), 0.5, 2)
    with pytest.raises(ValueError):
        build_superposition(spec, grid)
    with pytest.raises(ValueError):
        lobe_waves(spec, grid)


def test_amplitude_phase_roundtrip(grid):
    chirp = lambda x: 0.8 * x + 0.3 * x * x
    spec = SuperpositionSpec(WindowSpec("smooth_bump", 1.0, chirp), 2.0, 2,
                             alpha=0.9)
    psi = build_superposition(spec, grid)
    R, S = amplitude_phase(psi)
    assert np.all(R >= 0.0)
    assert np.all(S[R < 1e-12] == 0.0)
    rebuilt = R * np.exp(1j * S / psi.hbar)
    assert np.max(np.abs(rebuilt - psi.values)) <= 1e-10
