"""
Tests for the finite-ring constructors and structure computations.
"""

import numpy as np
import pytest

from morphic_analyser.config import Settings
from morphic_analyser.services.ring_service import RingService, ring_oracle
from morphic_analyser.utils.validators import CapExceededError, MorphismError, PreconditionError, RingConstructionError


class TestConstructors:
    """Test cases for the ring constructors."""

    def test_build_cyclic(self, z4):
        """Test Z(4) tables and identities."""
        assert z4.order == 4
        assert (z4.zero, z4.one) == (0, 1)
        assert z4.mul(2, 3) == 2
        assert z4.add(3, 3) == 2

    def test_build_cyclic_zero_ring(self, ring_service):
        """Test that Z(1) is the zero ring with one equal to zero."""
        ring = ring_service.build_cyclic(1)
        assert ring.order == 1
        assert ring.one == ring.zero == 0

    def test_build_cyclic_cap(self):
        """Test that a modulus above the order cap is rejected."""
        service = RingService(Settings(order_cap=10))
        with pytest.raises(CapExceededError):
            service.build_cyclic(16)

    def test_build_galois_f4(self, f4):
        """Test that x*x = x+1 in F4."""
        assert f4.order == 4
        assert f4.mul(2, 2) == 3
        assert f4.mul(3, 3) == 2
        assert f4.add(2, 3) == 1

    def test_build_galois_not_prime(self, ring_service):
        """Test that a non-prime characteristic is rejected."""
        with pytest.raises(RingConstructionError):
            ring_service.build_galois(4, [1, 1, 1])

    def test_build_galois_reducible(self, ring_service):
        """Test that x^2+1 = (x+1)^2 over F2 is rejected."""
        with pytest.raises(RingConstructionError, match="reducible"):
            ring_service.build_galois(2, [1, 0, 1])

    def test_build_matrix_ring(self, m2f2):
        """Test M2(F2) identity index and a product of elementary matrices."""
        assert m2f2.order == 16
        assert m2f2.one == 9
        # E11 * E12 = E12, E12 * E11 = 0
        assert m2f2.mul(8, 4) == 4
        assert m2f2.mul(4, 8) == 0
        assert not m2f2.is_commutative

    def test_matrix_index(self, ring_service, m2f2):
        """Test the literal [[1,1],[0,1]]."""
        assert ring_service.matrix_index(m2f2, [[1, 1], [0, 1]]) == 13

    def test_build_product(self, f2xf2):
        """Test the product codec l*|right| + r."""
        assert f2xf2.order == 4
        assert f2xf2.one == 3
        assert f2xf2.mul(2, 1) == 0
        assert f2xf2.mul(2, 3) == 2

    def test_build_quotient(self, ring_service):
        """Test Z(12)/(4) is a ring of order 4."""
        quotient = ring_service.build_quotient(ring_service.build_cyclic(12), [4])
        assert quotient.order == 4
        assert ring_service.verify_ring_axioms(quotient).passed

    def test_from_tables_rejects_bad_tables(self, ring_service):
        """Test that a non-distributive multiplication is rejected."""
        add = np.array([[0, 1], [1, 0]])
        mul = np.array([[1, 0], [0, 1]])
        with pytest.raises(RingConstructionError):
            ring_service.from_tables(add, mul)

    def test_ring_axioms(self, ring_service, z6, m2f2, square_zero):
        """Test the axiom check on valid rings."""
        for ring in (z6, m2f2, square_zero):
            report = ring_service.verify_ring_axioms(ring)
            assert report.passed
            assert report.exhaustive


class TestMorphisms:
    """Test cases for morphism validation and the named endomorphisms."""

    def test_valid_projection(self, ring_service, z4):
        """Test Z4 -> Z2 reduction."""
        z2 = ring_service.build_cyclic(2)
        phi = ring_service.check_morphism(z4, z2, [0, 1, 0, 1])
        assert not phi.is_automorphism

    def test_invalid_image(self, ring_service, z4):
        """Test that a non-additive map names the failing pair."""
        z2 = ring_service.build_cyclic(2)
        with pytest.raises(MorphismError, match="additivity"):
            ring_service.check_morphism(z4, z2, [0, 1, 1, 0])

    def test_frobenius(self, ring_service, f4):
        """Test that Frobenius on F4 swaps x and x+1."""
        sigma = ring_service.frobenius(f4)
        assert sigma.image.tolist() == [0, 1, 3, 2]
        assert sigma.is_automorphism

    def test_frobenius_needs_field(self, ring_service, z4):
        with pytest.raises(PreconditionError):
            ring_service.frobenius(z4)

    def test_swap(self, ring_service, f2xf2):
        """Test the coordinate swap on F2 x F2."""
        assert ring_service.coordinate_swap(f2xf2).image.tolist() == [0, 2, 1, 3]

    def test_conjugation(self, ring_service, m2f2):
        """Test that conjugation by a non-central unit moves E11."""
        sigma = ring_service.conjugation(m2f2, 13)
        assert sigma.is_automorphism
        assert sigma(8) != 8
        assert ring_service.conjugation(m2f2, 9).is_identity

    def test_conjugation_needs_unit(self, ring_service, m2f2):
        with pytest.raises(PreconditionError, match="not a unit"):
            ring_service.conjugation(m2f2, 8)


class TestStructure:
    """Test cases for units, idempotents, radical and corners."""

    def test_z4_structure(self, ring_service, z4):
        """Test that Z4 is local with radical {0, 2}."""
        structure = ring_service.units_idempotents_radical(z4)
        assert structure.units == [1, 3]
        assert structure.idempotents == [0, 1]
        assert structure.jacobson_radical == [0, 2]

    def test_m2f2_units(self, ring_service, m2f2):
        """Test the six units of M2(F2)."""
        assert ring_service.units_idempotents_radical(m2f2).units == [6, 7, 9, 11, 13, 14]

    def test_z6_decomposition(self, ring_service, z6):
        """Test Z6 = Z2 x Z3 along the idempotents 3 and 4."""
        structure = ring_service.units_idempotents_radical(z6)
        assert structure.primitive_central_idempotents == [3, 4]
        factors = ring_service.primitive_central_idempotent_decomposition(z6)
        assert [factor.ring.order for factor in factors] == [2, 3]

    def test_corner_needs_idempotent(self, ring_service, z6):
        with pytest.raises(PreconditionError):
            ring_service.corner(z6, 2)

    def test_oracle_annihilators(self, z4):
        """Test ann_l(2) = {0, 2} in Z4."""
        oracle = ring_oracle(z4)
        assert oracle.left_annihilator(2) == 0b0101
        assert oracle.left_principal(2) == 0b0101
