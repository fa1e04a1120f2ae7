"""
Shared fixtures: reference interferometer configurations and a seeded generator
"""

import numpy as np
import pytest

from salhi.core.model import InterferometerConfig


@pytest.fixture
def baseline():
    """G1 = 3, G2 = 5 at l = 0.96, eta = 0.4, optical seed, N = 1e6, dark point"""
    return InterferometerConfig.from_gains(3.0, 5.0, 0.96, 0.4)


@pytest.fixture
def moderate():
    """G1 = 3, G2 = 5 at l = 0.5, eta = 0.4"""
    return InterferometerConfig.from_gains(3.0, 5.0, 0.5, 0.4)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
