import numpy as np
import pytest

from harmap.funcexpr import warmup


@pytest.fixture(scope="session", autouse=True)
def _warm_backend():
    # jet kernel compilation (or cache load) happens once, outside any
    # timed assertion
    warmup()


@pytest.fixture()
def rng():
    return np.random.default_rng(20240901)
