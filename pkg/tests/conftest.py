import numpy as np
import pytest

from pwcc import HardSphere, Space, Strauss


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def plane():
    return Space(2)


@pytest.fixture
def hard_disk():
    return HardSphere(1.0)


@pytest.fixture
def strauss1():
    return Strauss(1.0, 1.0)
