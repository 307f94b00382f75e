import numpy as np
import pytest

from enrollsim.params import SimulationParams


@pytest.fixture
def params() -> SimulationParams:
    return SimulationParams()


@pytest.fixture
def small_params() -> SimulationParams:
    """A fast world for engine-level tests: same rules, fewer agents."""
    p = SimulationParams()
    p.population.n_seniors_init = 400
    p.population.carrying_capacity = 470
    p.engine.ticks = 25
    p.experiments.n_reps = 3
    return p


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
