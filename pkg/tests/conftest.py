import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from retroherm.fields import SampledField
from retroherm.media import ideal_contact

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def two_layer():
    return ideal_contact((1.0, 2.0), (0.0,))


@pytest.fixture(scope="session")
def gaussian_a1():
    return SampledField.on_grid(-8.0, 8.0, 2048, lambda x: np.exp(-x * x))


@pytest.fixture(scope="session")
def layered_grid():
    return SampledField.on_grid(-16.0, 16.0, 2048, lambda x: np.zeros_like(x))
