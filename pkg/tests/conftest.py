import numpy as np
import pytest
from hypothesis import settings

from semimhd.eos import IdealGas

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def gas53():
    return IdealGas(5.0 / 3.0)
