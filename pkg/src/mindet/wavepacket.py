"""Finite-extent window functions and non-overlapping lobe superpositions.

A window f is supported on [0, a] and normalized to ∫|f|²dx = 1.  A
superposition places N phase-tagged copies at shifts 0, L, …, (N−1)·L,

    ψ(x) = (1/√N) Σₙ e^{iαₙ} f(x − n·L),      L > a,

so the lobes share no grid point and |ψ|² is the same for every phase
choice.  The dual construction does the same on a momentum grid (window
h(p), extent b) with phase factors e^{−iαₙ}, which is the sign that makes
the position-space fringe come out as 1 + cos(xL/ħ − α).
"""

from dataclasses import dataclass

import numpy as np

from .grids import Grid1D, SampledWave

WINDOW_FAMILIES = ("smooth_bump", "rectangle", "raised_cosine", "truncated_gaussian")

SMOOTHNESS_CLASS = {
    "smooth_bump": "Cinf",
    "rectangle": "discontinuous",
    "raised_cosine": "C1",
    "truncated_gaussian": "C0",
}


@dataclass(frozen=True)
class WindowSpec:
    """Window family on [0, extent]; internal_phase is an optional callable
    x ↦ S(x)/ħ applied as e^{i·S(x)/ħ} on the support."""

    family: str
    extent: float = 1.0
    internal_phase: object = 0

    def __post_init__(self):
        if self.family not in WINDOW_FAMILIES:
            raise ValueError(f"unknown window family {self.family!r}; "
                             f"choose one of {WINDOW_FAMILIES}")
        if not (self.extent > 0):
            raise ValueError("window extent must be > 0")


@dataclass(frozen=True)
class SuperpositionSpec:
    """N lobes of `window` at shifts n·shift carrying phases αₙ.

    phase_mode "explicit": phases are taken from `phases` (length N), or for
    N = 2 from the single relative phase `alpha` as (0, α).
    phase_mode "linear": αₙ = n·alpha.
    """

    window: WindowSpec
    shift: float
    lobes: int = 2
    alpha: float = 0.0
    phases: tuple = None
    phase_mode: str = "explicit"

    def __post_init__(self):
        if self.lobes < 2:
            raise ValueError("superposition needs at least 2 lobes")
        if self.phase_mode not in ("explicit", "linear"):
            raise ValueError("phase_mode must be 'explicit' or 'linear'")

    def phase_list(self):
        if self.phase_mode == "linear":
            return self.alpha * np.arange(self.lobes)
        if self.phases is not None:
            phases = np.asarray(self.phases, dtype=float)
            if len(phases) != self.lobes:
                raise ValueError("phases length must equal number of lobes")
            return phases
        if self.lobes != 2:
            raise ValueError("explicit phases required when lobes > 2")
        return np.array([0.0, self.alpha])


def window_envelope(family, extent, x):
    """Unnormalized real window samples; exactly zero outside the support.

    smooth_bump        exp(−a²/(x(a−x))) on (0,a): infinitely differentiable,
                       every derivative → 0 at the support ends.
    rectangle          1 on [0,a): discontinuous, the slow-decay worst case.
    raised_cosine      sin²(πx/a): one continuous derivative.
    truncated_gaussian e^{−(x−a/2)²/(2σ²)} − e^{−a²/(8σ²)}, σ = a/4: continuous
                       but with a corner at the support ends.
    """
    a = extent
    vals = np.zeros(len(x))
    if family == "rectangle":
        vals[(x >= 0) & (x < a)] = 1.0
        return vals
    mask = (x > 0) & (x < a)
    xs = x[mask]
    if family == "smooth_bump":
        vals[mask] = np.exp(-a * a / (xs * (a - xs)))
    elif family == "raised_cosine":
        vals[mask] = np.sin(np.pi * xs / a) ** 2
    elif family == "truncated_gaussian":
        sigma = a / 4.0
        floor = np.exp(-a * a / (8.0 * sigma * sigma))
        vals[mask] = np.maximum(np.exp(-((xs - a / 2.0) ** 2) / (2.0 * sigma * sigma)) - floor, 0.0)
    else:
        raise ValueError(f"unknown window family {family!r}")
    return vals


def build_window(spec, grid, hbar=1.0, axis_kind="position"):
    """Normalized window wave on `grid`, zero outside [0, extent].

    Normalization uses the discrete sum Σ|f|²·step, so the built wave has
    unit norm on its own grid to machine precision.
    """
    if not grid.covers(0.0, spec.extent):
        raise ValueError("support not covered")
    x = grid.points()
    vals = window_envelope(spec.family, spec.extent, x)
    nrm = np.sqrt(np.sum(vals * vals) * grid.step)
    if nrm == 0.0:
        raise ValueError("support not covered")
    vals = vals / nrm
    values = vals.astype(complex)
    if callable(spec.internal_phase):
        on = vals > 0
        values[on] = values[on] * np.exp(1j * np.asarray(spec.internal_phase(x[on]), dtype=float))
    meta = {
        "family": spec.family,
        "extent": spec.extent,
        "smoothness_class": SMOOTHNESS_CLASS[spec.family],
        "support": (0.0, spec.extent),
    }
    return SampledWave(grid, values, hbar=hbar, axis_kind=axis_kind, metadata=meta)


def _assemble(spec, grid, hbar, axis_kind, phase_sign):
    """Shared lobe assembly for the position and momentum constructions."""
    a = spec.window.extent
    L = spec.shift
    N = spec.lobes
    phases = spec.phase_list()
    lobes = lobe_waves(spec, grid, hbar=hbar, axis_kind=axis_kind)

    values = np.zeros(grid.count, dtype=complex)
    occupancy = np.zeros(grid.count, dtype=int)
    supports = []
    for n, lobe in enumerate(lobes):
        values += np.exp(1j * phase_sign * phases[n]) * lobe.values
        occupancy += (np.abs(lobe.values) > 0).astype(int)
        supports.append((n * L, n * L + a))
    values /= np.sqrt(N)

    disjoint = bool(occupancy.max() <= 1)
    meta = {
        "family": spec.window.family,
        "extent": a,
        "shift": L,
        "lobes": N,
        "phases": tuple(float(p) for p in phases),
        "lobe_supports": tuple(supports),
        "disjoint_support": disjoint,
    }
    wave = SampledWave(grid, values, hbar=hbar, axis_kind=axis_kind, metadata=meta)
    if not disjoint:
        wave.add_warning("lobe supports share grid points")
    return wave


def build_superposition(spec, grid, hbar=1.0):
    """ψ(x) = (1/√N) Σₙ e^{iαₙ} f(x − n·L) on a position grid."""
    return _assemble(spec, grid, hbar, "position", phase_sign=+1.0)


def build_dual_superposition(spec, grid, hbar=1.0):
    """φ(p) = (1/√N) Σₙ e^{−iαₙ} h(p − n·L) on a momentum grid.

    The conjugated phase factor is what produces the position-space fringe
    |H(x)|²[1 + cos(xL/ħ − α)] with the same sign convention as the
    momentum-space fringe of the direct construction.
    """
    return _assemble(spec, grid, hbar, "momentum", phase_sign=-1.0)


def lobe_waves(spec, grid, hbar=1.0, axis_kind="position"):
    """The N individual unit-norm lobes f(x − n·L), phase factors NOT applied.

    The built superposition equals (1/√N)·Σₙ e^{±iαₙ}·lobe_n sample-for-sample
    (shifts are grid-exact), which is what the decomposition checks rely on.
    """
    a = spec.window.extent
    L = spec.shift
    if L <= a:
        raise ValueError("lobes overlap")
    if not grid.covers(0.0, (spec.lobes - 1) * L + a):
        raise ValueError("support not covered")
    base = build_window(spec.window, grid, hbar=hbar, axis_kind=axis_kind)
    shift_ratio = L / grid.step
    shift_pts = int(round(shift_ratio))
    aligned = abs(shift_ratio - shift_pts) < 1e-9
    out = []
    for n in range(spec.lobes):
        if aligned:
            vals = np.roll(base.values, n * shift_pts)
        else:
            lobe_grid = Grid1D(grid.origin - n * L, grid.step, grid.count)
            vals = build_window(spec.window, lobe_grid, hbar=hbar,
                                axis_kind=axis_kind).values
        meta = dict(base.metadata)
        meta["support"] = (n * L, n * L + a)
        out.append(SampledWave(grid, vals, hbar=hbar, axis_kind=axis_kind,
                               metadata=meta))
    return out


def amplitude_phase(wave):
    """Polar decomposition values = R·e^{iS/ħ}.

    R = |values|; S = ħ·(continuously unwrapped argument), unwrapped
    independently on each connected run of support points, and set to 0
    where R < 10⁻¹² (the phase of a vanishing amplitude is meaningless).
    """
    R = np.abs(wave.values)
    S = np.zeros(wave.grid.count)
    on = R >= 1e-12
    idx = np.flatnonzero(on)
    if len(idx):
        breaks = np.flatnonzero(np.diff(idx) > 1)
        for run in np.split(idx, breaks + 1):
            S[run] = wave.hbar * np.unwrap(np.angle(wave.values[run]))
    return R, S
