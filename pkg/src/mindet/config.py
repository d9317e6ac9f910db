"""Experiment configuration: blessed defaults, JSON config files, CLI
overrides, validation with actionable messages, and derived grids.

One canonical scenario anchors every golden file: smooth_bump window with
a=1, L=2, ħ=1, N=2, α ∈ {0, π/4, π/2, π}, position grid of step 1/512 on
[−16, 48), momentum analysis cropped to ±64π.  All other grids (θ, Wigner,
dual, oscillator) are derived deterministically from these numbers.
"""

import hashlib
import json
import math
import os
from dataclasses import dataclass, field, asdict

import numpy as np

from .grids import Grid1D
from .wavepacket import WINDOW_FAMILIES, WindowSpec, SuperpositionSpec

DEFAULT_ALPHAS = (0.0, math.pi / 4.0, math.pi / 2.0, math.pi)

VERSION = "0.1.0"


@dataclass
class ExperimentConfig:
    window: str = "smooth_bump"
    a: float = 1.0
    L: float = 2.0
    N: int = 2
    phase_mode: str = "explicit"
    alphas: tuple = DEFAULT_ALPHAS
    hbar: float = 1.0
    grid_origin: float = -16.0
    grid_step: float = 1.0 / 512.0
    grid_count: int = 32768
    n_max: int = 6
    basis_size: int = 128
    out_dir: str = "results"
    fmt: str = "csv"
    seed: int = 0
    snap_notes: list = field(default_factory=list)

    # ---- derived objects -------------------------------------------------
    def grid(self):
        return Grid1D(self.grid_origin, self.grid_step, self.grid_count)

    def window_spec(self, internal_phase=0):
        return WindowSpec(self.window, self.a, internal_phase)

    def superposition_spec(self, alpha=0.0, internal_phase=0):
        mode = self.phase_mode
        if self.N > 2 and mode == "explicit":
            mode = "linear"
        return SuperpositionSpec(self.window_spec(internal_phase), self.L,
                                 self.N, alpha=alpha, phase_mode=mode)

    def p_max(self):
        """Analysis crop for momentum-space quantities."""
        return 64.0 * np.pi * self.hbar / self.a

    def theta_grid(self):
        """Symmetric θ lattice covering the characteristic-function support
        islands with one support-radius of exact-zero margin."""
        step = min(self.a / (20.0 * self.hbar), 1.0 / 64.0)
        radius = (self.a + (self.N - 1) * self.L) / self.hbar
        half = int(math.ceil(radius / step)) + 64
        return Grid1D(-half * step, step, 2 * half + 1)

    def wigner_wave_grid(self):
        """Dedicated position grid for phase-space work: half the resolution
        of the main grid (the lag transform doubles the effective rate) and a
        power-of-two point count around the lobe span."""
        span = (self.N - 1) * self.L + self.a
        dx = self.grid_step * 2.0
        pad = float(math.ceil(span + 1.0))
        count = 1
        while count < 4.0 * pad / dx:
            count *= 2
        return Grid1D(-pad, dx, count)

    def wigner_x_window(self):
        span = (self.N - 1) * self.L + self.a
        return (-0.5, span + 0.5)

    def dual_p_grid(self):
        """Momentum-primary grid for the dual construction (same shape as the
        canonical position grid, reinterpreted as a p axis)."""
        return Grid1D(self.grid_origin, self.grid_step, self.grid_count)

    def representation_grid(self):
        """Grid for the oscillator basis: covers the classical turning point
        of state basis_size−1 plus margin, and the lobe span, on the main
        lattice step; bounds rounded to half-units."""
        turning = math.sqrt(2.0 * self.hbar * (self.basis_size - 0.5))
        pad = math.ceil(2.0 * (turning + 4.5)) / 2.0
        lo = -pad
        hi = ((self.N - 1) * self.L + self.a) + pad
        count = int(round((hi - lo) / self.grid_step))
        return Grid1D(lo, self.grid_step, count)

    def hash(self):
        payload = {k: v for k, v in asdict(self).items() if k != "snap_notes"}
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]

    def echo(self):
        d = asdict(self)
        d["config_hash"] = self.hash()
        d["version"] = VERSION
        return d


_CONFIG_KEYS = {
    "window", "a", "L", "N", "phase_mode", "alphas", "hbar",
    "grid", "n_max", "basis_size", "out_dir", "format", "seed",
}


def parse_alpha_token(tok):
    """Parse an α entry: plain float or multiples of π like 'pi', 'pi/4',
    '3pi/2', '-pi'."""
    t = str(tok).strip().lower().replace(" ", "")
    if "pi" not in t:
        return float(t)
    num, _, den = t.partition("/")
    den = float(den) if den else 1.0
    coef = num[: num.index("pi")]
    if coef in ("", "+"):
        c = 1.0
    elif coef == "-":
        c = -1.0
    else:
        c = float(coef)
    return c * math.pi / den


def parse_alpha_list(text):
    return tuple(parse_alpha_token(t) for t in str(text).split(",") if t.strip())


def load_config_file(path):
    """Read a JSON config file; unknown keys are rejected loudly."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ValueError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ValueError(f"config file {path} is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise ValueError("config file must contain a JSON object at top level")
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config key(s): {', '.join(sorted(unknown))}; "
                         f"allowed: {', '.join(sorted(_CONFIG_KEYS))}")
    return data


def _snap(value, step, notes, name):
    snapped = round(value / step) * step
    if snapped != value:
        notes.append(f"snapped {name} from {value!r} to {snapped!r} "
                     f"(grid step {step!r})")
    return snapped


def build_config(file_data=None, overrides=None):
    """Merge defaults ← config file ← CLI overrides (flags win), snap the
    geometry onto the lattice, and validate everything up front."""
    cfg = ExperimentConfig()
    data = dict(file_data or {})
    over = {k: v for k, v in (overrides or {}).items() if v is not None}

    grid_data = data.pop("grid", {})
    merged = {**data, **over}

    if "window" in merged:
        cfg.window = str(merged["window"])
    if "a" in merged:
        cfg.a = float(merged["a"])
    if "L" in merged:
        cfg.L = float(merged["L"])
    if "N" in merged:
        cfg.N = int(merged["N"])
    if "phase_mode" in merged:
        cfg.phase_mode = str(merged["phase_mode"])
    if "alphas" in merged:
        raw = merged["alphas"]
        cfg.alphas = (parse_alpha_list(raw) if isinstance(raw, str)
                      else tuple(float(v) for v in raw))
    if "hbar" in merged:
        cfg.hbar = float(merged["hbar"])
    if "n_max" in merged:
        cfg.n_max = int(merged["n_max"])
    if "basis_size" in merged:
        cfg.basis_size = int(merged["basis_size"])
    if "out_dir" in merged:
        cfg.out_dir = str(merged["out_dir"])
    if "format" in merged:
        cfg.fmt = str(merged["format"])
    if "seed" in merged:
        cfg.seed = int(merged["seed"])
    if grid_data:
        cfg.grid_origin = float(grid_data.get("origin", cfg.grid_origin))
        cfg.grid_step = float(grid_data.get("step", cfg.grid_step))
        cfg.grid_count = int(grid_data.get("count", cfg.grid_count))
    env_out = os.environ.get("MINDET_OUT")
    if env_out and "out_dir" not in over:
        cfg.out_dir = env_out

    validate_config(cfg)
    return cfg


def validate_config(cfg):
    """Reject every downstream constraint violation before any computation,
    with messages that say what to change."""
    if cfg.window not in WINDOW_FAMILIES:
        raise ValueError(f"unknown window family {cfg.window!r}; "
                         f"choose one of {WINDOW_FAMILIES}")
    if not (cfg.a > 0):
        raise ValueError(f"window extent a must be > 0 (got {cfg.a})")
    if not (cfg.hbar > 0):
        raise ValueError(f"hbar must be > 0 (got {cfg.hbar})")
    if cfg.N < 2:
        raise ValueError(f"N must be at least 2 lobes (got {cfg.N})")
    if cfg.phase_mode not in ("explicit", "linear"):
        raise ValueError(f"phase_mode must be 'explicit' or 'linear' (got {cfg.phase_mode!r})")
    if not (cfg.grid_step > 0):
        raise ValueError(f"grid step must be > 0 (got {cfg.grid_step})")
    if cfg.grid_count < 2:
        raise ValueError(f"grid count must be >= 2 (got {cfg.grid_count})")
    if not cfg.alphas:
        raise ValueError("alpha sweep must contain at least one value")
    if cfg.n_max < 0 or cfg.n_max > 12:
        raise ValueError(f"n_max must be in 0..12 (got {cfg.n_max})")
    if cfg.basis_size < 2:
        raise ValueError(f"basis_size must be >= 2 (got {cfg.basis_size})")
    if cfg.fmt not in ("csv", "json"):
        raise ValueError(f"format must be 'csv' or 'json' (got {cfg.fmt!r})")

    cfg.grid_origin = _snap(cfg.grid_origin, cfg.grid_step, cfg.snap_notes, "grid origin")
    cfg.a = _snap(cfg.a, cfg.grid_step, cfg.snap_notes, "a")
    cfg.L = _snap(cfg.L, cfg.grid_step, cfg.snap_notes, "L")
    if not (cfg.a > 0):
        raise ValueError(f"window extent a={cfg.a} collapsed under grid snapping; "
                         f"use a finer grid step than {cfg.grid_step}")
    if cfg.L <= cfg.a:
        raise ValueError(f"lobes overlap: L={cfg.L} must exceed the window extent a={cfg.a}")
    span = (cfg.N - 1) * cfg.L + cfg.a
    grid = cfg.grid()
    if not grid.covers(0.0, span):
        raise ValueError(f"grid [{grid.origin}, {grid.last}] does not cover the lobe "
                         f"span [0, {span}]; enlarge grid count or move the origin")
    return cfg
