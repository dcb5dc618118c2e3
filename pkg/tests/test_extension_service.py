"""
Tests for trivial extensions R∝M.
"""

import pytest

from morphic_analyser.config import Settings
from morphic_analyser.services.extension_service import ExtensionService
from morphic_analyser.utils.validators import BimoduleError, CapExceededError, PreconditionError


class TestBuildTrivialExtension:
    """Test cases for build_trivial_extension."""

    def test_z4_self_extension(self, extension_service, bimodule_service, ring_service, z4):
        """Test (0,1)(0,1) = 0 and (2,0)(0,1) = (0,2) in Z4∝Z4."""
        ext = extension_service.build_trivial_extension(z4, bimodule_service.regular_bimodule(z4))
        S = ext.as_ring
        assert S.order == 16
        assert S.one == ext.encode(1, 0) == 4
        assert S.mul(ext.encode(0, 1), ext.encode(0, 1)) == S.zero
        assert S.mul(ext.encode(2, 0), ext.encode(0, 1)) == ext.encode(0, 2)
        assert ring_service.verify_ring_axioms(S).passed

    def test_zero_module(self, extension_service, bimodule_service, z4):
        """Test that R∝0 is a copy of R."""
        ext = extension_service.build_trivial_extension(z4, bimodule_service.zero_bimodule(z4))
        assert ext.as_ring.same_tables(z4)

    def test_twisted_product(self, extension_service, bimodule_service, ring_service, f2xf2):
        """Test that the swap twist makes (1,0)∝ act to zero on the right."""
        sigma = ring_service.coordinate_swap(f2xf2)
        ext = extension_service.skew_poly_quotient(f2xf2, sigma)
        S = ext.as_ring
        assert S.order == 16
        assert S.mul(ext.encode(0, 2), ext.encode(2, 0)) == S.zero
        assert S.mul(ext.encode(2, 0), ext.encode(0, 2)) == ext.encode(0, 2)

    def test_module_over_other_ring(self, extension_service, bimodule_service, ring_service, z4):
        other = ring_service.build_cyclic(4)
        with pytest.raises(BimoduleError):
            extension_service.build_trivial_extension(z4, bimodule_service.regular_bimodule(other))

    def test_cap(self, ring_service, bimodule_service):
        """Test that |R|·|M| above the cap is rejected."""
        service = ExtensionService(Settings(order_cap=200))
        f = ring_service.build_cyclic(16)
        with pytest.raises(CapExceededError):
            service.build_trivial_extension(f, bimodule_service.regular_bimodule(f))


class TestCornersAndRadical:
    """Test cases for corner rings and the radical of R∝M."""

    def test_corner_ring(self, extension_service, bimodule_service, z6):
        """Test (3,0)S(3,0) = 3Z6 ∝ 3Z6."""
        ext = extension_service.build_trivial_extension(z6, bimodule_service.regular_bimodule(z6))
        corner = extension_service.corner_ring(ext, 3, 3)
        assert corner.size == 4

    def test_corner_needs_idempotents(self, extension_service, bimodule_service, z6):
        ext = extension_service.build_trivial_extension(z6, bimodule_service.regular_bimodule(z6))
        with pytest.raises(PreconditionError):
            extension_service.corner_ring(ext, 2, 3)

    def test_verify_idempotent_corner_ring(self, extension_service, bimodule_service, m2f2):
        ext = extension_service.build_trivial_extension(m2f2, bimodule_service.regular_bimodule(m2f2))
        assert extension_service.verify_idempotent_corner_ring(ext).passed

    def test_verify_radical_extension(self, extension_service, bimodule_service, z4, f4):
        for ring in (z4, f4):
            ext = extension_service.build_trivial_extension(ring, bimodule_service.regular_bimodule(ring))
            report = extension_service.verify_radical_extension(ext)
            assert report.passed, report.failures
