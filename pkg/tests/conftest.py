"""
Pytest configuration and shared fixtures.
"""

import pytest
import tempfile
from pathlib import Path

from config.settings import CONFIG_DIR
from models.catalog import MapCatalog
from models.rational_map import from_polynomial
from services.bounds_service import BoundsService
from services.cache_service import SQLiteCacheService
from services.dynamics_service import DynamicsService
from services.verify_service import VerifyService
from utils.parsing import parse_map


@pytest.fixture
def temp_dir():
    """Create a temporary directory for tests."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def cache_service(temp_dir):
    """Create a SQLiteCacheService instance for testing."""
    return SQLiteCacheService(cache_dir=temp_dir, max_age_hours=24)


@pytest.fixture
def dynamics_service():
    """DynamicsService with period cap 2 and no cache."""
    return DynamicsService(period_cap=2)


@pytest.fixture
def bounds_service():
    return BoundsService()


@pytest.fixture
def verify_service(dynamics_service, bounds_service):
    return VerifyService(dynamics=dynamics_service, bounds=bounds_service)


@pytest.fixture(scope="session")
def catalog():
    """The shipped catalog of named maps."""
    return MapCatalog(CONFIG_DIR / "maps.json")


@pytest.fixture
def square():
    """x -> x^2."""
    return from_polynomial([0, 0, 1])


@pytest.fixture
def dfixed3():
    """(x-1)(x-2)(x-3) + x = x^3 - 6x^2 + 12x - 6."""
    return from_polynomial([-6, 12, -6, 1])


@pytest.fixture
def period2_12():
    """(x^2-1)(x^2-4) - x = x^4 - 5x^2 - x + 4."""
    return from_polynomial([4, -1, -5, 0, 1])


@pytest.fixture
def baron_cycle():
    """x^3 - 3x^2 + x + 2: 2-cycle (0, 2), fixed point 1."""
    return from_polynomial([2, 1, -3, 1])


@pytest.fixture
def ramified_pair():
    """x^3 - x^2: 0 and infinity are ramified fixed points, 1 is a tail point of 0."""
    return from_polynomial([0, 0, -1, 1])


@pytest.fixture
def bad_at_five():
    """[X^2 : 5Y^2], bad reduction only at 5."""
    return parse_map("F=X^2; G=5*Y^2")


@pytest.fixture
def corpus(catalog):
    """Every catalog map, keyed by catalog key."""
    return {entry.key: entry.to_map() for entry in catalog}
