import pytest

from app.cache import cache
from app.lattice import PotentialField


@pytest.fixture
def clean_field():
    return PotentialField(c=0.0, seed=1)


@pytest.fixture
def disordered_field():
    return PotentialField(c=1.0, seed=3, realization=2)


@pytest.fixture(autouse=True)
def empty_cache():
    cache.clear()
    yield
    cache.clear()
