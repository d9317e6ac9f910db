"""Oscillator-basis expansions: level distributions see the phase, truncated
operator power sums show the honest truncation residue."""

import numpy as np
import pytest

from mindet.grids import Grid1D
from mindet.wavepacket import WindowSpec, SuperpositionSpec, build_superposition, lobe_waves
from mindet.representations import (
    oscillator_basis,
    basis_orthonormality_error,
    expand,
    operator_moments,
    hamiltonian_expectation,
    cross_hamiltonian_term,
)

NB = 32
GRID = Grid1D(-12.5, 1.0 / 128.0, 3584)   # [−12.5, 15.5): turning point + span


def _basis():
    return oscillator_basis(GRID, NB)


def _spec(alpha):
    return SuperpositionSpec(WindowSpec("smooth_bump", 1.0), 2.0, 2, alpha=alpha)


def test_basis_orthonormal():
    basis = _basis()
    assert basis_orthonormality_error(basis) <= 1e-13
    assert np.allclose(basis.eigenvalues, np.arange(NB) + 0.5)


def test_basis_eigenfunctions_satisfy_h():
    """⟨uₙ, H uₙ⟩ = n + ½ for the grid-sampled Hermite functions."""
    from mindet.grids import SampledWave

    basis = _basis()
    for n in (0, 1, 5, 20):
        w = SampledWave(basis.grid, basis.functions[n])
        e = hamiltonian_expectation(w, 1)
        assert abs(e - (n + 0.5)) <= 1e-8
        assert abs(e.imag) <= 1e-12


def test_basis_narrow_grid_rejected():
    with pytest.raises(ValueError):
        oscillator_basis(Grid1D(-3.0, 1.0 / 64.0, 384), NB)


def test_level_distribution_sees_alpha():
    """P(aₙ) = |cₙ|² mixes the lobes: total-variation gap across α is
    macroscopic."""
    basis = _basis()
    probs = []
    for alpha in (0.0, np.pi):
        psi = build_superposition(_spec(alpha), GRID)
        probs.append(expand(psi, basis).probabilities)
    tv = 0.5 * np.sum(np.abs(probs[0] - probs[1]))
    assert tv > 1e-3


def test_lobe_mixing_identity():
    """cₙ = (cₙ⁽¹⁾ + e^{iα}cₙ⁽²⁾)/√2 exactly on the lattice."""
    basis = _basis()
    alpha = np.pi / 3.0
    psi = build_superposition(_spec(alpha), GRID)
    lobes = lobe_waves(_spec(alpha), GRID)
    ex = expand(psi, basis, lobes=lobes, alpha=alpha)
    assert ex.reconstruction_error <= 1e-12
    assert len(ex.lobe_coefficients) == 2
    # both lobes genuinely occupy the same levels (the mixing is real)
    c1, c2 = ex.lobe_coefficients
    assert np.max(np.abs(c1 * np.conj(c2))) > 1e-3


def test_truncation_is_reported():
    """Finite-extent lobes converge slowly in the oscillator basis: the
    captured norm stays visibly below 1 and the flag says so."""
    basis = _basis()
    psi = build_superposition(_spec(0.0), GRID)
    ex = expand(psi, basis)
    assert ex.captured < 1.0 - 1e-6
    assert ex.captured > 0.9
    assert "truncation insufficient" in ex.flags


def test_power_sums_carry_truncation_residue():
    """Σ_{n<Nb} aₙᵏ P(aₙ) is α-dependent at any practical Nb — the truncated
    tail is where the cancellation happens.  This is the mechanism behind
    the one intentionally red acceptance criterion."""
    basis = _basis()
    rows = []
    for alpha in (0.0, np.pi / 2.0, np.pi):
        psi = build_superposition(_spec(alpha), GRID)
        ex = expand(psi, basis)
        rows.append(operator_moments(ex, basis.eigenvalues, k_max=2))
    rows = np.array(rows)
    rel = (rows.max(axis=0) - rows.min(axis=0)) / np.maximum(1.0, np.abs(rows.mean(axis=0)))
    assert rel[0] > 1e-5   # even the captured mass itself moves with α
    assert rel[2] > 1e-5


def test_exact_hamiltonian_moments_are_alpha_free():
    """The direct ⟨ψ, Hᵏψ⟩ quadrature (no basis truncation) is α-blind —
    the contrast that pins the blame on the truncated spectral sum."""
    vals = []
    for alpha in (0.0, np.pi / 2.0, np.pi):
        psi = build_superposition(_spec(alpha), GRID)
        vals.append([hamiltonian_expectation(psi, k).real for k in (1, 2)])
    vals = np.array(vals)
    rel = (vals.max(axis=0) - vals.min(axis=0)) / np.maximum(1.0, np.abs(vals.mean(axis=0)))
    assert np.max(rel) <= 1e-8


def test_disjoint_cross_hamiltonian_vanishes():
    """∫ψ₂*Hᵏψ₁dx = 0 for non-overlapping lobes: H is local, so Hᵏψ₁ keeps
    ψ₁'s support."""
    lobes = lobe_waves(_spec(0.0), GRID)
    for k in (0, 1, 2):
        v = cross_hamiltonian_term(lobes[0], lobes[1], k)
        assert abs(v) <= 1e-8


def test_expand_grid_mismatch():
    basis = _basis()
    other = build_superposition(_spec(0.0), Grid1D(-12.5, 1.0 / 128.0, 3585))
    with pytest.raises(ValueError):
        expand(other, basis)


def test_operator_moment_order_limit():
    basis = _basis()
    psi = build_superposition(_spec(0.0), GRID)
    ex = expand(psi, basis)
    with pytest.raises(ValueError):
        operator_moments(ex, basis.eigenvalues, k_max=5)
