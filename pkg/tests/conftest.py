"""Shared fixtures."""

import numpy as np
import pytest

from sqrbm_em.core.distributions import VisibleDistribution
from sqrbm_em.core.utils import set_quiet
from sqrbm_em.model import Params

ENV_VARS = (
    "SQRBM_ETA",
    "SQRBM_EPSILON",
    "SQRBM_INIT_RANGE",
    "SQRBM_EPOCHS",
    "SQRBM_EPOCHS_M",
    "SQRBM_VERIFY_TOL",
    "SQRBM_WORKERS",
    "SQRBM_DEBUG",
    "LOG_LEVEL",
    "LOG_FILE_PATH",
)


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch, tmp_path):
    """Run every test from an empty directory with no SQRBM_* overrides."""
    for name in ENV_VARS:
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)
    yield
    set_quiet(False)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def make_params(rng):
    def _make(n, m, scale=2.0):
        return Params.from_flat(n, m, rng.uniform(-scale, scale, size=n + 2 * m + n * m))

    return _make


@pytest.fixture
def make_data(rng):
    def _make(n):
        return VisibleDistribution.from_weights(n, rng.uniform(0.05, 1.0, size=1 << n))

    return _make
