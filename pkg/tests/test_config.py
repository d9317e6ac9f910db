"""Configuration: defaults, parsing, merging, validation, derived grids."""

import json
import math

import numpy as np
import pytest

from mindet.config import (
    DEFAULT_ALPHAS,
    ExperimentConfig,
    build_config,
    load_config_file,
    parse_alpha_list,
    parse_alpha_token,
    validate_config,
)


def test_defaults():
    cfg = build_config()
    assert cfg.window == "smooth_bump"
    assert cfg.a == 1.0 and cfg.L == 2.0 and cfg.N == 2 and cfg.hbar == 1.0
    assert cfg.alphas == DEFAULT_ALPHAS
    assert cfg.grid() .count == 32768
    assert cfg.grid().origin == -16.0
    assert cfg.grid().step == 1.0 / 512.0
    assert cfg.n_max == 6 and cfg.basis_size == 128
    assert cfg.fmt == "csv"
    assert not cfg.snap_notes


def test_parse_alpha_tokens():
    assert parse_alpha_token("0") == 0.0
    assert parse_alpha_token("1.5") == 1.5
    assert parse_alpha_token("pi") == math.pi
    assert parse_alpha_token("pi/4") == math.pi / 4.0
    assert parse_alpha_token("3pi/2") == 3.0 * math.pi / 2.0
    assert parse_alpha_token("-pi") == -math.pi
    assert parse_alpha_token("2pi") == 2.0 * math.pi
    assert parse_alpha_list("0, pi/4, pi/2, pi") == DEFAULT_ALPHAS
    with pytest.raises(ValueError):
        parse_alpha_token("tau")


def test_build_config_precedence(tmp_path):
    """Flags beat the config file, the file beats the defaults."""
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"window": "raised_cosine", "L": 3.0,
                                "alphas": "0, pi"}), encoding="utf-8")
    file_data = load_config_file(str(path))
    cfg = build_config(file_data, overrides={"L": 4.0, "a": None})
    assert cfg.window == "raised_cosine"   # from file
    assert cfg.L == 4.0                    # flag wins
    assert cfg.a == 1.0                    # default survives None override
    assert cfg.alphas == (0.0, math.pi)


def test_config_file_grid_block(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"grid": {"origin": -8.0, "step": 1.0 / 256.0,
                                         "count": 8192}}), encoding="utf-8")
    cfg = build_config(load_config_file(str(path)))
    assert cfg.grid() .origin == -8.0
    assert cfg.grid().count == 8192


def test_config_file_unknown_key(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"widow": "smooth_bump"}), encoding="utf-8")
    with pytest.raises(ValueError, match="unknown config key"):
        load_config_file(str(path))


def test_config_file_errors(tmp_path):
    with pytest.raises(ValueError, match="not found"):
        load_config_file(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ValueError, match="not valid JSON"):
        load_config_file(str(bad))
    arr = tmp_path / "arr.json"
    arr.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ValueError, match="JSON object"):
        load_config_file(str(arr))


def test_mindet_out_env(monkeypatch):
    monkeypatch.setenv("MINDET_OUT", "/tmp/somewhere")
    cfg = build_config()
    assert cfg.out_dir == "/tmp/somewhere"
    # an explicit override still wins
    cfg = build_config(overrides={"out_dir": "elsewhere"})
    assert cfg.out_dir == "elsewhere"


@pytest.mark.parametrize("overrides,message", [
    ({"window": "boxcar"}, "window family"),
    ({"a": -1.0}, "extent a"),
    ({"hbar": 0.0}, "hbar"),
    ({"N": 1}, "at least 2"),
    ({"L": 0.5}, "lobes overlap"),
    ({"alphas": ()}, "at least one"),
    ({"n_max": 13}, "n_max"),
    ({"basis_size": 1}, "basis_size"),
    ({"format": "xml"}, "format"),
    ({"phase_mode": "spin"}, "phase_mode"),
])
def test_validation_messages(overrides, message):
    with pytest.raises(ValueError, match=message):
        build_config(overrides=overrides)


def test_grid_must_cover_lobes():
    with pytest.raises(ValueError, match="does not cover"):
        build_config(file_data={"grid": {"origin": -1.0, "step": 1.0 / 512.0,
                                         "count": 1024}})


def test_geometry_snapping():
    """Off-lattice a and L are snapped to the grid and the snap is recorded."""
    cfg = build_config(overrides={"a": 1.0001, "L": 2.0003})
    step = 1.0 / 512.0
    assert cfg.a == round(1.0001 / step) * step
    assert cfg.L == round(2.0003 / step) * step
    assert len(cfg.snap_notes) == 2
    assert "snapped" in cfg.snap_notes[0]


def test_derived_grids():
    cfg = build_config()
    tg = cfg.theta_grid()
    assert tg.step == 1.0 / 64.0
    assert tg.origin == -tg.last                     # symmetric
    assert tg.covers(-3.0, 3.0)                      # support radius a + L
    assert tg.count % 2 == 1                         # θ = 0 is a lattice point
    assert tg.index_of(0.0) == tg.count // 2

    wg = cfg.wigner_wave_grid()
    assert wg.origin == -4.0
    assert wg.step == 1.0 / 256.0
    assert wg.count == 4096                          # power of two

    assert cfg.wigner_x_window() == (-0.5, 3.5)
    assert np.isclose(cfg.p_max(), 64.0 * np.pi)

    rg = cfg.representation_grid()
    turning = math.sqrt(2.0 * (cfg.basis_size - 0.5))
    assert rg.origin <= -turning - 4.0
    assert rg.last >= 3.0 + turning + 4.0


def test_hash_tracks_content():
    c1 = build_config()
    c2 = build_config()
    assert c1.hash() == c2.hash()
    c3 = build_config(overrides={"L": 3.0})
    assert c3.hash() != c1.hash()
    echo = c1.echo()
    assert echo["config_hash"] == c1.hash()
    assert echo["version"] == "0.1.0"
    # snap notes are bookkeeping, not content
    c4 = build_config(overrides={"a": 1.0001})
    c5 = build_config(overrides={"a": round(1.0001 * 512) / 512})
    assert c4.hash() == c5.hash()


def test_superposition_spec_switches_to_linear():
    cfg = build_config(overrides={"N": 5})
    spec = cfg.superposition_spec(0.3)
    assert spec.phase_mode == "linear"
    assert spec.lobes == 5
    cfg2 = build_config()
    assert cfg2.superposition_spec(0.3).phase_mode == "explicit"
