import numpy as np
import pytest

from minkarr import geometry as geo
from minkarr.rng import CounterRNG


@pytest.fixture
def square():
    return geo.square()


@pytest.fixture
def disc():
    return geo.disc()


@pytest.fixture
def hexagon():
    return geo.hexagon()


def random_polygons(n, seed=0):
    rng = CounterRNG(seed, stream=7)
    return [geo.random_symmetric_polygon(rng) for _ in range(n)]


def assert_close(a, b, tol):
    assert np.max(np.abs(np.asarray(a, float) - np.asarray(b, float))) <= tol
