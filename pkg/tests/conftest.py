"""Shared fixtures.

The expensive end-to-end artifacts (canonical-configuration experiment
bundles and the full criteria run) are computed once per session and shared;
unit tests that only need API behavior use a reduced configuration that runs
in milliseconds.
"""

import numpy as np
import pytest

from mindet.config import build_config


@pytest.fixture(scope="session")
def cfg():
    """The canonical configuration every golden number is pinned to."""
    return build_config()


@pytest.fixture(scope="session")
def grid(cfg):
    return cfg.grid()


@pytest.fixture(scope="session")
def small_cfg():
    """Reduced grid for cheap API-level tests: same physics (a=1, L=2),
    coarser lattice."""
    return build_config(file_data={
        "grid": {"origin": -8.0, "step": 1.0 / 128.0, "count": 2048},
    })


@pytest.fixture(scope="session")
def acceptance_run():
    """One full criteria pass (with the determinism rerun) shared by the
    acceptance gate and the experiment-level verdict tests."""
    from time import perf_counter

    from mindet.acceptance import run_all

    t0 = perf_counter()
    results, bundles = run_all(include_determinism=True)
    elapsed = perf_counter() - t0
    return {r.number: r for r in results}, bundles, elapsed


@pytest.fixture(scope="session")
def bundles(acceptance_run):
    return acceptance_run[1]


def verdict(bundle, name):
    v = bundle.verdicts[name]
    return v["observed"], v["threshold"], v["pass"]
