"""
Tests for Q/R over Z and F_p[x] and the morphic partners of R∝Q/R.
"""

import pytest

from morphic_analyser.models.torsion import (
    AnnihilatorDescriptor,
    FractionModOne,
    IntegerDomain,
    PolynomialDomain,
    QTrivExtElement,
)
from morphic_analyser.services.torsion_service import TorsionService
from morphic_analyser.utils.validators import PreconditionError


@pytest.fixture
def torsion(settings):
    return TorsionService(settings)


@pytest.fixture
def zz(torsion):
    return torsion.domain("Z")


@pytest.fixture
def f2x(torsion):
    return torsion.domain("GF(2)[x]")


def q(torsion, domain, text):
    return torsion.qtriv_element(domain, text)


class TestParsing:
    """Test cases for domain, element and fraction parsing."""

    def test_domains(self, torsion):
        assert isinstance(torsion.domain("Z"), IntegerDomain)
        assert isinstance(torsion.domain("ZZ"), IntegerDomain)
        field = torsion.domain("GF(3)")
        assert isinstance(field, PolynomialDomain)
        assert field.p == 3
        assert torsion.domain("GF(2)[x]") is torsion.domain("GF(2)")

    def test_unknown_domain(self, torsion):
        with pytest.raises(PreconditionError):
            torsion.domain("Q")
        with pytest.raises(PreconditionError):
            torsion.domain("GF(4)")

    def test_canonical_fractions(self, torsion, zz):
        """Test that fractions are reduced into [0, 1) with coprime parts."""
        assert torsion.fraction(zz, "3/6").to_json() == "1/2"
        assert torsion.fraction(zz, "-1/3").to_json() == "2/3"
        assert torsion.fraction(zz, "4/2").is_zero()
        assert torsion.fraction(zz, "5").is_zero()

    def test_polynomial_fraction(self, torsion, f2x):
        x = torsion.fraction(f2x, "1/(x^2+1)")
        assert x.to_json() == {"p": [1], "q": [1, 0, 1]}
        assert torsion.fraction(f2x, "(x^2+x)/(x^2+1)").to_json() == {"p": [1], "q": [1, 1]}

    def test_bad_element(self, torsion, zz, f2x):
        with pytest.raises(PreconditionError):
            torsion.element(zz, "x")
        with pytest.raises(PreconditionError):
            torsion.element(f2x, "y")
        with pytest.raises(PreconditionError):
            torsion.qtriv_element(zz, "1/2")

    def test_zero_denominator(self, torsion, zz):
        with pytest.raises(PreconditionError, match="Zero denominator"):
            torsion.fraction(zz, "1/0")


class TestArithmetic:
    """Test cases for arithmetic in Q/R and R∝Q/R."""

    def test_product(self, torsion, zz):
        """Test (2, 1/3)(3, 1/2) = (6, 2·1/2 + 3·1/3) = (6, 0)."""
        product = q(torsion, zz, "2,1/3") * q(torsion, zz, "3,1/2")
        assert product.to_json() == {"r": 6, "m": "0/1"}

    def test_unit_inverse(self, torsion, zz):
        e = q(torsion, zz, "-1,1/3")
        assert e.is_unit()
        assert e * e.unit_inverse() == QTrivExtElement.one(zz)

    def test_divide(self, torsion, zz):
        m = torsion.fraction(zz, "1/2")
        z = torsion.divide(m, zz.element(3))
        assert z.to_json() == "1/6"
        assert torsion.scalar_mul(zz.element(3), z) == m
        with pytest.raises(PreconditionError):
            torsion.divide(m, zz.zero)

    def test_annihilator_generators(self, torsion, zz):
        assert torsion.annihilator_generator_in_R(torsion.fraction(zz, "5/12")) == zz.element(12)
        assert torsion.annihilator_generator_in_QmodR(zz.element(4)).to_json() == "1/4"
        assert torsion.annihilator_generator_in_QmodR(zz.element(-4)).to_json() == "3/4"
        with pytest.raises(PreconditionError):
            torsion.annihilator_generator_in_QmodR(zz.zero)

    def test_polynomial_arithmetic(self, torsion, f2x):
        """Test x·(1/x^2) = 1/x over F2[x]."""
        x = torsion.element(f2x, "x")
        y = torsion.fraction(f2x, "1/x^2")
        assert torsion.scalar_mul(x, y) == torsion.fraction(f2x, "1/x")
        assert torsion.add(y, y).is_zero()


class TestPartners:
    """Test cases for morphic partners and their certification."""

    def test_partner_closed_forms(self, torsion, zz):
        assert torsion.morphic_partner(q(torsion, zz, "3,1/5")).to_json() == {"r": 0, "m": "1/3"}
        assert torsion.morphic_partner(q(torsion, zz, "0,2/7")).to_json() == {"r": 7, "m": "0/1"}
        assert torsion.morphic_partner(QTrivExtElement.zero(zz)) == QTrivExtElement.one(zz)

    def test_descriptors(self, torsion, zz):
        """Test ann((3, 1/5)) = {(0, y) : den(y) | 3}."""
        e = q(torsion, zz, "3,1/5")
        descriptor = torsion.annihilator_descriptor(e)
        assert descriptor == AnnihilatorDescriptor(zz.zero, zz.element(3))
        assert descriptor.contains(q(torsion, zz, "0,1/3"))
        assert not descriptor.contains(q(torsion, zz, "0,1/5"))
        assert not descriptor.contains(QTrivExtElement.one(zz))
        assert torsion.principal_descriptor(q(torsion, zz, "0,2/7")) == AnnihilatorDescriptor(zz.zero, zz.element(7))

    @pytest.mark.parametrize("text", ["3,1/5", "0,2/7", "0,0", "1,0", "-6,5/8", "12,0"])
    def test_verify_partner(self, torsion, zz, text):
        e = q(torsion, zz, text)
        report = torsion.verify_partner(e, torsion.morphic_partner(e), sample_bound=200, samples=50)
        assert report.passed, report.witness
        assert report.closed_form

    def test_wrong_partner_rejected(self, torsion, zz):
        """Test e = (0, 1/2) against w = (3, 0): (2, 0) kills e but is not in S·3."""
        e = q(torsion, zz, "0,1/2")
        w = q(torsion, zz, "3,0")
        report = torsion.verify_partner(e, w)
        assert not report.passed
        assert not report.closed_form
        assert report.witness["element"] == {"r": 2, "m": "0/1"}
        assert report.witness["in_annihilator"] and not report.witness["in_principal"]

    def test_certify_partner(self, torsion, f2x):
        e = QTrivExtElement.lift(torsion.element(f2x, "x"))
        w = torsion.certify_partner(e)
        assert w.r.is_zero()
        assert w.m == torsion.fraction(f2x, "1/x")

    def test_verify_partners(self, torsion, zz):
        report = torsion.verify_partners(zz, count=40, bound=100)
        assert report.passed, report.failures
        assert report.checked >= 40
        assert report.details["negative_control"]["passed"] is False

    def test_verify_partners_polynomial(self, torsion, f2x):
        report = torsion.verify_partners(f2x, count=20, bound=4)
        assert report.passed, report.failures
        assert "negative_control" not in report.details


class TestTheoremChecks:
    """Test cases for the contract, domain and lattice checks."""

    def test_fractions_enumeration(self, torsion, zz):
        """Test the nonzero canonical fractions with denominator up to 4."""
        rendered = sorted(x.to_json() for x in torsion.fractions(zz, 4))
        assert rendered == ["1/2", "1/3", "1/4", "2/3", "3/4"]

    def test_contracts(self, torsion, zz, f2x):
        assert torsion.verify_annihilator_contracts(zz, 30).passed
        assert torsion.verify_annihilator_contracts(f2x, 3).passed

    def test_domain_conditions(self, torsion, zz, f2x):
        report = torsion.verify_domain_conditions(zz, 12)
        assert report.passed, report.failures
        assert torsion.verify_domain_conditions(f2x, 2).passed

    @pytest.mark.parametrize("raw", ["2/3", "5/12", "7/9"])
    def test_cyclic_submodule_is_reciprocal(self, torsion, zz, raw):
        """Test that R·(p/q) = R·(1/q), reached through the inverse of p mod q."""
        y = torsion.fraction(zz, raw)
        assert torsion.generates_reciprocal(y)

    def test_cyclic_submodule_is_reciprocal_polynomial(self, torsion, f2x):
        assert torsion.generates_reciprocal(torsion.fraction(f2x, "x/(x^2+x+1)"))

    def test_lattice_bijection(self, torsion, zz, f2x):
        report = torsion.lattice_bijection_sample(zz, 20)
        assert report.passed
        assert report.details["submodules"] == 20
        assert torsion.lattice_bijection_sample(f2x, 3).details["submodules"] == 15

    def test_no_faithful_element(self, torsion, zz):
        assert torsion.verify_no_faithful_element(zz, 50).passed

    def test_fraction_reduce_rejects_mixed_domains(self, zz, f2x):
        with pytest.raises(PreconditionError, match="mismatch"):
            FractionModOne.reduce(zz.one, f2x.one)


class TestWeakBaer:
    """Test cases for weak_baer_bezout_witness."""

    def test_reduced_ring(self, torsion, z6):
        report = torsion.weak_baer_bezout_witness(z6)
        assert report.passed
        assert report.details["reduced"] and report.details["bezout"]
        assert report.details["weak_baer"] and report.details["morphic"]

    def test_local_ring(self, torsion, z4):
        """Test ann(2) = {0, 2} in Z4 has no idempotent generator."""
        report = torsion.weak_baer_bezout_witness(z4)
        assert report.passed
        assert not report.details["reduced"]
        assert not report.details["weak_baer"]
        assert report.details["counterexample"] == {"element": 2, "annihilator": [0, 2]}

    def test_non_commutative(self, torsion, m2f2):
        with pytest.raises(PreconditionError):
            torsion.weak_baer_bezout_witness(m2f2)
