import sys
from pathlib import Path

import pytest

import hisample as hs

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def triangle():
    return hs.from_edges([(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def path4():
    return hs.from_edges([(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def path3():
    return hs.from_edges([(0, 1), (1, 2)])


@pytest.fixture
def star6():
    # K_{1,5}: center 0, five leaves
    return hs.from_edges([(0, i) for i in range(1, 6)])


@pytest.fixture(scope="session")
def ba1000():
    return hs.generate_ba(1000, 3, seed=0)
