import numpy as np
import pytest

from mfrisk.subordinators import MixedParams


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


@pytest.fixture
def ref_params():
    """The reference parameter set used throughout the suite."""
    return MixedParams(0.9, 0.5, 0.5, 0.5, 1.0)


@pytest.fixture
def alt_params():
    return MixedParams(0.7, 0.3, 0.8, 0.2, 1.0)
