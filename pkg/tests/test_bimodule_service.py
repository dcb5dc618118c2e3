"""
Tests for bimodule constructors, annihilators and the Bézout decision.
"""

import pytest

from morphic_analyser.utils import bitsets
from morphic_analyser.utils.validators import BimoduleError


class TestConstructors:
    """Test cases for bimodule constructors."""

    def test_regular_bimodule(self, bimodule_service, z4):
        """Test that both actions of regular(Z4) are the multiplication table."""
        module = bimodule_service.regular_bimodule(z4)
        assert module.order == 4
        assert (module.left_action == z4.mul_table).all()
        assert bimodule_service.verify_bimodule_axioms(module).passed

    def test_twisted_frobenius(self, ring_service, bimodule_service, f4):
        """Test that 1·x = 1·sigma(x) = x+1 in F4(frobenius)."""
        module = bimodule_service.twisted_bimodule(f4, ring_service.frobenius(f4))
        assert module.act_right(1, 2) == 3
        assert module.act_left(2, 1) == 2
        assert bimodule_service.verify_bimodule_axioms(module).passed

    def test_twisted_swap(self, ring_service, bimodule_service, f2xf2):
        """Test (1,0)·(1,0) = (1,0)·(0,1) = 0 under the swap twist."""
        module = bimodule_service.twisted_bimodule(f2xf2, ring_service.coordinate_swap(f2xf2))
        assert module.act_right(2, 2) == 0

    def test_twist_rejects_foreign_morphism(self, ring_service, bimodule_service, f4):
        """Test that a morphism of another ring cannot twist."""
        other = ring_service.build_galois(2, [1, 1, 1])
        with pytest.raises(BimoduleError):
            bimodule_service.twisted_bimodule(f4, ring_service.frobenius(other))

    def test_zero_and_sum(self, bimodule_service, ring_service):
        """Test the zero bimodule and a direct sum of regular modules."""
        z2 = ring_service.build_cyclic(2)
        assert bimodule_service.zero_bimodule(z2).order == 1
        regular = bimodule_service.regular_bimodule(z2)
        total = bimodule_service.direct_sum(regular, regular)
        assert total.order == 4
        assert bimodule_service.verify_bimodule_axioms(total).passed

    def test_quotient_bimodule(self, bimodule_service, z6):
        """Test Z6 / 2Z6 has two elements."""
        module = bimodule_service.quotient_bimodule(bimodule_service.regular_bimodule(z6), [2])
        assert module.order == 2
        assert bimodule_service.verify_bimodule_axioms(module).passed

    def test_sub_bimodule(self, bimodule_service, z4):
        """Test the sub-bimodule 2Z4."""
        regular = bimodule_service.regular_bimodule(z4)
        sub = bimodule_service.sub_bimodule(regular, bimodule_service.submodule_closure(regular, [2]))
        assert sub.order == 2


class TestAnnihilators:
    """Test cases for annihilators and cyclic submodules."""

    def test_left_annihilator_of_module_element(self, bimodule_service, z4):
        module = bimodule_service.regular_bimodule(z4)
        assert bimodule_service.left_annihilator_of_module_element(module, 2).members == [0, 2]
        assert bimodule_service.left_annihilator_of_module_element(module, 0).members == [0, 1, 2, 3]

    def test_swap_annihilator(self, ring_service, bimodule_service, f2xf2):
        """Test ann_l((1,0)) = {0, (0,1)} in F2xF2(swap)."""
        module = bimodule_service.twisted_bimodule(f2xf2, ring_service.coordinate_swap(f2xf2))
        assert bimodule_service.left_annihilator_of_module_element(module, 2).members == [0, 1]

    def test_annihilators_all(self, bimodule_service, z4):
        """Test the four annihilators in regular(Z4)."""
        quad = bimodule_service.annihilators_all(bimodule_service.regular_bimodule(z4), 2, 0)
        assert quad.module_left.members == [0, 2]
        assert quad.module_right.members == [0, 2]
        assert quad.ring_left.members == [0, 1, 2, 3]

    def test_annihilators_of_one(self, bimodule_service, z4):
        quad = bimodule_service.annihilators_all(bimodule_service.regular_bimodule(z4), 1, 1)
        assert quad.module_left.members == [0]
        assert quad.ring_left.members == [0]

    def test_cyclic_submodule(self, ring_service, bimodule_service, z4, f4):
        """Test R·2 in Z4 and 1·R in F4(frobenius)."""
        assert bimodule_service.cyclic_submodule(bimodule_service.regular_bimodule(z4), 2).members == [0, 2]
        twisted = bimodule_service.twisted_bimodule(f4, ring_service.frobenius(f4))
        assert bimodule_service.cyclic_submodule(twisted, 1, "right").members == [0, 1, 2, 3]


class TestBezout:
    """Test cases for principal generators and the Bézout decision."""

    def test_principal_generator(self, bimodule_service, z4):
        subset = bimodule_service.cyclic_submodule(bimodule_service.regular_bimodule(z4), 2)
        assert bimodule_service.principal_generator(z4, subset) == 2

    def test_non_principal_ideal(self, bimodule_service, square_zero):
        """Test that ann_l(x) = {0, x, y, x+y} has no generator."""
        from morphic_analyser.models.algebra import SubsetHandle
        from morphic_analyser.services.ring_service import ring_oracle

        mask = ring_oracle(square_zero).left_annihilator(2)
        assert bitsets.members(mask) == [0, 2, 4, 6]
        subset = SubsetHandle.create(square_zero, mask, "left_ideal")
        assert bimodule_service.principal_generator(square_zero, subset) is None

    def test_bezout_rings(self, bimodule_service, z4, m2f2, square_zero):
        assert bimodule_service.is_bezout(z4, "left").holds
        assert bimodule_service.is_bezout(m2f2, "right").holds
        verdict = bimodule_service.is_bezout(square_zero, "left")
        assert not verdict.holds
        assert verdict.counterexample is not None

    def test_bezout_triples(self, bimodule_service, z6):
        assert bimodule_service.verify_bezout_triples(z6).passed
