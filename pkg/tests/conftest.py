import numpy as np
import pytest

from synphi import make_system_x, make_system_y


@pytest.fixture(scope="session")
def system_x():
    return make_system_x()


@pytest.fixture(scope="session")
def system_y():
    return make_system_y()


@pytest.fixture()
def rng():
    return np.random.default_rng(0)
