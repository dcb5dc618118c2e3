"""
Tests for element witnesses, ring-level scans and the trivial-extension characterizations.
"""

import pytest

from morphic_analyser.config import Settings
from morphic_analyser.services.morphic_service import MorphicService
from morphic_analyser.services.ring_service import ring_oracle
from morphic_analyser.utils import bitsets
from morphic_analyser.utils.validators import CapExceededError, PreconditionError


@pytest.fixture
def morphic(settings):
    return MorphicService(settings)


@pytest.fixture
def z4_self(extension_service, bimodule_service, z4):
    return extension_service.build_trivial_extension(z4, bimodule_service.regular_bimodule(z4))


class TestWitnesses:
    """Test cases for element-level witnesses."""

    def test_morphic_witness_z4(self, morphic, z4):
        """Test that 2 is its own partner in Z4."""
        witness = morphic.morphic_witness(z4, 2)
        assert witness.partner == 2
        assert witness.ann_a.members == [0, 2]

    def test_unit_has_zero_partner(self, morphic, z6, m2f2):
        assert morphic.morphic_witness(z6, 1).partner == 0
        assert morphic.morphic_witness(m2f2, m2f2.one, "two-sided").partner == 0

    def test_no_witness_in_z4_self_extension(self, morphic, z4_self):
        """Test that (0,2) has no partner: ann_l((0,2)) has 8 elements."""
        S = z4_self.as_ring
        a = z4_self.encode(0, 2)
        assert morphic.morphic_witness(S, a) is None
        assert bitsets.size(ring_oracle(S).left_annihilator(a)) == 8

    def test_quasi_morphic_witness(self, morphic, z4):
        """Test b = c = 2 for a = 2 and (b, c) = (1, 1) for a = 0."""
        witness = morphic.quasi_morphic_witness(z4, 2)
        assert (witness.generator, witness.co_element, witness.coincide) == (2, 2, True)
        witness = morphic.quasi_morphic_witness(z4, 0)
        assert (witness.generator, witness.co_element) == (1, 1)

    def test_quasi_morphic_absent(self, morphic, z4_self):
        assert morphic.quasi_morphic_witness(z4_self.as_ring, z4_self.encode(0, 2)) is None

    def test_regularity(self, morphic, z6, z4):
        """Test 2 in Z6 is unit regular via 5, 2 in Z4 is not regular, 0 uses the unit 1."""
        verdict = morphic.regularity(z6, 2)
        assert verdict.is_unit_regular
        assert (verdict.inner_inverse, verdict.unit) == (2, 5)
        assert morphic.regularity(z4, 2).status == "not_regular"
        assert morphic.regularity(z4, 0).unit == 1

    def test_index_out_of_range(self, morphic, z4):
        with pytest.raises(PreconditionError):
            morphic.morphic_witness(z4, 4)


class TestRingProperties:
    """Test cases for the ring-level report."""

    def test_z4(self, morphic, z4):
        report = morphic.ring_properties(z4)
        assert report.morphic and report.quasi_morphic and report.bezout
        assert not report.unit_regular
        assert report.local

    def test_square_zero_ring(self, morphic, square_zero):
        """Test F2[x,y]/(x,y)^2 fails at x."""
        report = morphic.ring_properties(square_zero)
        assert not report.morphic
        assert not report.quasi_morphic
        assert not report.bezout
        assert report.counterexamples["left_morphic"] == 2

    def test_m2f2(self, morphic, m2f2):
        report = morphic.ring_properties(m2f2)
        assert report.morphic and report.unit_regular and report.semisimple and report.simple
        assert not report.is_commutative

    def test_scan_cap_without_sampling(self, z4_self):
        """Test that a scan above the cap raises when sampling is off."""
        service = MorphicService(Settings(full_scan_cap=8))
        with pytest.raises(CapExceededError):
            service.ring_properties(z4_self.as_ring, allow_sampling=False)

    def test_sampled_scan(self, z4_self):
        service = MorphicService(Settings(full_scan_cap=8, seed=3))
        report = service.ring_properties(z4_self.as_ring)
        assert report.sampled


class TestCharacterizations:
    """Test cases for the trivial-extension characterizations."""

    def test_annihilator_characterization(self, morphic, z4_self):
        report = morphic.verify_annihilator_characterization(z4_self)
        assert report.passed
        assert report.checked == 4 * 4 * 4

    def test_characterization_counterexample(self, morphic, z4_self):
        """Test (a, m, n) = (2, 1, 0): ann_l^R(1) = 0 is not R·2, so both sides fail."""
        outcome = morphic.check_annihilator_characterization(z4_self, 2, 1, 0)
        assert not outcome.a1 and not outcome.a2
        assert outcome.consistent

    def test_rl_transfer(self, morphic, m2f2, z4):
        """Test E11 in M2(F2) and 2 in Z4."""
        assert morphic.verify_rl_transfer(m2f2, 8).passed
        assert morphic.verify_rl_transfer(z4, 2).passed

    def test_gencz(self, morphic, ring_service, f4, z4):
        assert morphic.verify_gencz(f4, ring_service.frobenius(f4)).passed
        assert morphic.verify_gencz(z4, ring_service.identity_morphism(z4)).passed

    def test_central_idempotent_swap(self, morphic, extension_service, ring_service, f2xf2):
        """Test that e = (1,0) fails em = me at m = (0,1) under the swap twist."""
        ext = extension_service.skew_poly_quotient(f2xf2, ring_service.coordinate_swap(f2xf2))
        report = morphic.verify_central_idempotent_commutation(ext)
        assert report.passed
        assert not report.details["left_morphic"]
        assert {"e": 2, "m": 1} in report.details["commutation_failures"]

    def test_central_idempotent_identity(self, morphic, extension_service, ring_service, f2xf2):
        ext = extension_service.skew_poly_quotient(f2xf2, ring_service.identity_morphism(f2xf2))
        report = morphic.verify_central_idempotent_commutation(ext)
        assert report.details["left_morphic"]
        assert report.details["commutation_failures"] == []

    def test_ehrlich(self, morphic, z6, m2f2, square_zero):
        for ring in (z6, m2f2, square_zero):
            assert morphic.verify_ehrlich(ring).passed

    def test_boolean_twists(self, morphic):
        report = morphic.verify_boolean_twists(2)
        assert report.passed
        assert report.details["endomorphisms"] == 4

    def test_strongly_regular_twist(self, morphic, ring_service, f2xf2, z4):
        swap = morphic.verify_strongly_regular_twist(f2xf2, ring_service.coordinate_swap(f2xf2))
        assert swap.passed
        assert not swap.details["fixes_idempotents"]
        with pytest.raises(PreconditionError):
            morphic.verify_strongly_regular_twist(z4, ring_service.identity_morphism(z4))

    def test_self_extension_z4(self, morphic, z4):
        """Test Z4∝Z4 is not left morphic, failing first at (0,2)."""
        report = morphic.verify_self_extension(z4)
        assert report.passed
        assert report.details["left_morphic"] is False
        assert report.details["unit_regular"] is False
        assert report.details["counterexample"] == {"r": 0, "m": 2}

    def test_twisted_self_extension_frobenius(self, morphic, ring_service, f4):
        """Test F4∝F4(frobenius): frobenius fixes 0 and 1, the extension is left morphic."""
        report = morphic.verify_twisted_self_extension(f4, ring_service.frobenius(f4))
        assert report.passed, report.failures
        assert report.details["fixes_idempotents"]
        assert report.details["left_morphic"] and report.details["unit_regular"]
        assert report.checked == 2

    def test_twisted_self_extension_swap(self, morphic, ring_service, f2xf2):
        """Test that only the implication is checked when sigma moves an idempotent."""
        report = morphic.verify_twisted_self_extension(f2xf2, ring_service.coordinate_swap(f2xf2))
        assert report.passed
        assert not report.details["fixes_idempotents"]
        assert not report.details["left_morphic"]
        assert report.checked == 1

    def test_twisted_self_extension_not_unit_regular(self, morphic, ring_service, z4):
        report = morphic.verify_twisted_self_extension(z4, ring_service.identity_morphism(z4))
        assert report.passed
        assert report.details == {"sigma": "id", "left_morphic": False, "unit_regular": False, "fixes_idempotents": True}

    def test_self_extension_field(self, morphic, f4):
        report = morphic.verify_self_extension(f4)
        assert report.passed
        assert report.details["morphic"]
