import numpy as np
import pytest

from lightclock.bogoliubov import perturbative_bogoliubov
from lightclock.motion import PrescribedMotion
from lightclock.scenario import ScenarioConfig, build_trajectory, toy_config


@pytest.fixture(scope="session")
def earth_config():
    return ScenarioConfig()


@pytest.fixture(scope="session")
def earth_traj(earth_config):
    return build_trajectory(earth_config)


@pytest.fixture(scope="session")
def earth_coeffs(earth_traj):
    return perturbative_bogoliubov(earth_traj, 20, 40)


@pytest.fixture(scope="session")
def toy_cfg(earth_config):
    return toy_config(earth_config)


@pytest.fixture(scope="session")
def toy_traj(toy_cfg):
    return build_trajectory(toy_cfg)


@pytest.fixture(scope="session")
def ramp():
    # omega_1 ~ 94 rad/s over 1 s, v/c ~ 1e-2
    return PrescribedMotion.smooth_ramp(1.0, 1.0, 0.3, 0.5, c=30.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)
