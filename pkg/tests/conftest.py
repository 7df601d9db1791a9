import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def rand_image(rng, width, height):
    return rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8)
