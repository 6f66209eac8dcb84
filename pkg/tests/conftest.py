# tests/conftest.py

import numpy as np
import pytest

from logger.logger_manager import LoggerManager

LoggerManager.shutdown_logger()
LoggerManager.initialize_logger(experiment_name='tests', mode='test', stream_only=True)

from physics.dynamics import SystemState  # noqa: E402
from physics.params import PhysicalParams, derive_params  # noqa: E402


@pytest.fixture
def organization():
    p = PhysicalParams.preset('organization')
    return p, derive_params(p)


@pytest.fixture
def bistability():
    p = PhysicalParams.preset('bistability')
    return p, derive_params(p)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def make_state():
    def _make(positions, momenta=None, alpha=0j, t=0.0) -> SystemState:
        positions = np.asarray(positions, dtype=float).reshape(-1, 2)
        momenta = np.zeros_like(positions) if momenta is None else momenta
        return SystemState(t=t, alpha=alpha, pos=positions, mom=momenta)
    return _make
