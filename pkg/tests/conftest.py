import numpy as np
import pytest

import hypcurv as hc


@pytest.fixture(scope="session")
def grid_m1():
    return hc.build_grid(1, 6)


@pytest.fixture(scope="session")
def grid_m2():
    return hc.build_grid(2, 6)


@pytest.fixture(scope="session")
def octahedron():
    dirs = np.array([[1.0, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]])
    return hc.from_vertices(2, dirs, np.ones(6))


@pytest.fixture(scope="session")
def square():
    return hc.regular_polygon(4, 1.0)
