"""Shared fixtures: session-cached preset runs.

Full preset runs take a couple of seconds each, so every (name, scheme)
pair is simulated once per session and shared by all test modules.
"""

import numpy as np
import pytest

from hhrdnet import integrate, presets


@pytest.fixture(scope="session")
def preset_record():
    cache = {}

    def get(name, scheme="rk4"):
        key = (name, scheme)
        if key not in cache:
            p = presets.preset(name)
            cache[key] = integrate.simulate(
                p.spec, p.initial_state(), p.time_grid, scheme=scheme,
                probes=p.probes, snapshot_times=p.snapshot_times)
        return cache[key]

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)
