import pathlib

import numpy as np
import pytest

from pslap.alpha import alpha_complex
from pslap.dataio import read_xyz
from pslap.geometry import PointSet

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def six_points() -> PointSet:
    return read_xyz(DATA / "six_points.xyz")


@pytest.fixture(scope="session")
def six_complex(six_points):
    return alpha_complex(six_points)


@pytest.fixture(scope="session")
def icosahedron_points() -> PointSet:
    return read_xyz(DATA / "icosahedron.xyz")


@pytest.fixture(scope="session")
def icosahedron_complex(icosahedron_points):
    return alpha_complex(icosahedron_points)


def random_cloud(seed: int, n: int, d: int) -> PointSet:
    rng = np.random.default_rng(seed)
    return PointSet(rng.uniform(0.0, 2.0, size=(n, d)))
