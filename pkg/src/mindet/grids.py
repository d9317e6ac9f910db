"""Uniform 1-D grids, sampled complex waves, densities, and quadrature.

Everything downstream works on uniform grids: a grid is (origin, step, count)
with points xᵢ = origin + i·step.  Waves carry an axis kind ("position" or
"momentum") and ħ; densities are nonnegative real samples on a grid.
Integrals are composite trapezoid sums (half weight on the two end points),
which is spectrally accurate for the smooth, decaying integrands used here.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid: points(i) = origin + i*step, 0 <= i < count."""

    origin: float
    step: float
    count: int

    def __post_init__(self):
        if not (self.step > 0):
            raise ValueError("grid step must be > 0")
        if self.count < 2:
            raise ValueError("grid count must be >= 2")

    def points(self):
        return self.origin + self.step * np.arange(self.count)

    def point(self, i):
        return self.origin + self.step * i

    @property
    def extent(self):
        """Length of the sampled interval, (count-1)*step."""
        return self.step * (self.count - 1)

    @property
    def last(self):
        return self.point(self.count - 1)

    def index_of(self, x, tol=1e-9):
        """Index of the grid point equal to x, or ValueError if x is off-lattice."""
        r = (x - self.origin) / self.step
        i = int(round(r))
        if abs(r - i) > tol or not (0 <= i < self.count):
            raise ValueError(f"value {x} is not a grid point")
        return i

    def covers(self, lo, hi):
        eps = 1e-12 * max(1.0, abs(lo), abs(hi))
        return self.origin <= lo + eps and self.last >= hi - eps


class SampledWave:
    """Complex wave sampled on a grid.

    axis_kind is "position" (ψ(x)) or "momentum" (φ(p)).  metadata carries
    provenance such as the conjugate-grid origin used by the unitary
    transforms and any attached warnings.
    """

    def __init__(self, grid, values, hbar=1.0, axis_kind="position", metadata=None):
        values = np.asarray(values, dtype=complex)
        if len(values) != grid.count:
            raise ValueError("values length must equal grid count")
        if not (hbar > 0):
            raise ValueError("hbar must be > 0")
        if axis_kind not in ("position", "momentum"):
            raise ValueError("axis_kind must be 'position' or 'momentum'")
        self.grid = grid
        self.values = values
        self.hbar = float(hbar)
        self.axis_kind = axis_kind
        self.metadata = dict(metadata or {})

    def norm2(self):
        """∫|ψ|²dx as a plain Riemann sum (exact for compact supports on the lattice)."""
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.step)

    def density(self):
        return Distribution1D(self.grid, np.abs(self.values) ** 2,
                              metadata=dict(self.metadata))

    @property
    def warnings(self):
        return tuple(self.metadata.get("warnings", ()))

    def add_warning(self, text):
        self.metadata.setdefault("warnings", []).append(text)


class Distribution1D:
    """Nonnegative density samples on a grid."""

    def __init__(self, grid, density, metadata=None):
        density = np.asarray(density, dtype=float)
        if len(density) != grid.count:
            raise ValueError("density length must equal grid count")
        if np.any(density < -1e-12):
            raise ValueError("density must be nonnegative")
        self.grid = grid
        self.density = np.maximum(density, 0.0)
        self.metadata = dict(metadata or {})

    def mass(self):
        return quadrature(self, np.ones(self.grid.count))

    @property
    def warnings(self):
        return tuple(self.metadata.get("warnings", ()))


def quadrature(d, weight):
    """∫ weight(x)·density(x) dx by the composite trapezoid rule.

    weight is an array sampled on d.grid (or a scalar).  End points get half
    weight.  Non-finite integrand values are an error, not a NaN result.
    """
    w = np.broadcast_to(np.asarray(weight, dtype=float), (d.grid.count,))
    integrand = w * d.density
    if not np.all(np.isfinite(integrand)):
        raise ValueError("non-finite integrand")
    s = np.sum(integrand) - 0.5 * (integrand[0] + integrand[-1])
    return float(s * d.grid.step)


def inner_product(a, b):
    """⟨a, b⟩ = Σ conj(a[i])·b[i]·step.  Grids and ħ must match exactly."""
    if a.grid != b.grid or a.hbar != b.hbar:
        raise ValueError("grid mismatch")
    return complex(np.sum(np.conj(a.values) * b.values) * a.grid.step)


def decay_fraction(values, outer_fraction=0.05):
    """Largest |value| on the outer `outer_fraction` of points at each end."""
    n = len(values)
    k = max(1, int(round(n * outer_fraction)))
    edge = np.concatenate([np.abs(values[:k]), np.abs(values[-k:])])
    return float(edge.max())


def check_momentum_decay(wave, threshold=1e-6, outer_fraction=0.05):
    """Attach a "grid too small" warning when |φ| has not decayed at the edges.

    Finite-extent position functions have infinite-extent transforms, so every
    momentum grid truncates; this flags the truncation when it is visible above
    `threshold`.  Returns the attached warning text or None.
    """
    worst = decay_fraction(wave.values, outer_fraction)
    if worst >= threshold:
        text = f"grid too small: |values| reach {worst:.3e} on the outer {outer_fraction:.0%} of points"
        wave.add_warning(text)
        return text
    return None
