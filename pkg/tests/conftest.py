"""
Pytest configuration and shared fixtures.
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from morphic_analyser.config import Settings
from morphic_analyser.services.bimodule_service import BimoduleService
from morphic_analyser.services.catalog_service import CatalogService
from morphic_analyser.services.extension_service import ExtensionService
from morphic_analyser.services.ring_service import RingService

SQUARE_ZERO = 'Table("f2xy_square_zero")'


@pytest.fixture
def settings():
    """Settings with a fixed seed and small sample counts."""
    return Settings(seed=7, sample_count=2000, denominator_bound=1000, degree_bound=6)


@pytest.fixture
def ring_service(settings):
    return RingService(settings)


@pytest.fixture
def bimodule_service(settings):
    return BimoduleService(settings)


@pytest.fixture
def extension_service(settings):
    return ExtensionService(settings)


@pytest.fixture
def catalog(settings):
    return CatalogService(settings)


@pytest.fixture
def z4(ring_service):
    return ring_service.build_cyclic(4)


@pytest.fixture
def z6(ring_service):
    return ring_service.build_cyclic(6)


@pytest.fixture
def f4(ring_service):
    """F_2[x]/(x^2+x+1); index c0 + 2*c1, so x is 2 and x+1 is 3."""
    return ring_service.build_galois(2, [1, 1, 1])


@pytest.fixture
def f2xf2(ring_service):
    """Index 2*l + r: (1,0) is 2, (0,1) is 1."""
    f2 = ring_service.build_cyclic(2)
    return ring_service.build_product(f2, f2)


@pytest.fixture
def m2f2(ring_service):
    """Row-major, most significant entry first: the identity is 9."""
    return ring_service.build_matrix_ring(2, ring_service.build_cyclic(2))


@pytest.fixture
def square_zero(catalog):
    """F_2[x,y]/(x,y)^2 with index c0 + 2*c_x + 4*c_y."""
    return catalog.build_ring(SQUARE_ZERO)
