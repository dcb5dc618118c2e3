"""
Tests for the catalog-wide property suite.
"""

import pytest

from morphic_analyser.models.schemas import PropertyReport, SuiteReport
from morphic_analyser.services.verification_service import SuiteSizes, VerificationService, suite_summary
from morphic_analyser.utils.validators import TheoremViolationError


@pytest.fixture
def verification(settings):
    return VerificationService(settings)


class TestSuiteSizes:
    """Test cases for SuiteSizes."""

    def test_scaled(self):
        sizes = SuiteSizes.scaled(10)
        assert sizes.partner_count == 10
        assert sizes.contract_bound == 10
        assert sizes.diag_witness_count == 10
        assert sizes.matrix_size == 4
        assert sizes.self_extension_cap == 64

    def test_scaled_never_grows(self):
        assert SuiteSizes.scaled(5000).partner_bound == 1000


class TestHarness:
    """Test cases for report merging and error capture."""

    def test_merge(self):
        first = PropertyReport(name="a", checked=3)
        second = PropertyReport(name="b")
        second.check(False, x=1)
        merged = VerificationService._merge("both", [first, second])
        assert merged.checked == 4
        assert not merged.passed
        assert merged.failures == [{"x": 1, "report": "b"}]
        assert set(merged.details) == {"0:a", "1:b"}

    def test_raising_check_is_recorded(self, verification):
        def alarm():
            raise TheoremViolationError("boom")

        suite = SuiteReport()
        verification._run(suite, "alarm", alarm)
        assert not suite.passed
        assert suite.failed == ["alarm"]
        assert suite.reports["alarm"].failures == [{"error": "boom"}]

    def test_unexpected_error_is_recorded(self, verification):
        """Test that a crash in one check is reported and the next check still runs."""
        suite = SuiteReport()
        verification._run(suite, "broken", lambda: {}["missing"])
        verification._run(suite, "fine", lambda: PropertyReport(name="fine", checked=1))
        assert suite.failed == ["broken"]
        assert suite.reports["broken"].failures == [{"error": "KeyError: 'missing'"}]
        assert suite.reports["fine"].passed

    def test_condition_label_in_failure_data(self):
        report = PropertyReport(name="labelled")
        assert not report.check(False, condition="divisible", a=3)
        assert report.failures == [{"condition": "divisible", "a": 3}]


class TestChecks:
    """Test cases for individual suite checks."""

    def test_ring_axioms(self, verification):
        report = verification.check_ring_axioms()
        assert report.passed, report.failures
        assert report.checked == len(verification.catalog.catalog())

    def test_ring_equivalences(self, verification):
        report = verification.check_ring_equivalences(witness_cap=16)
        assert report.passed, report.failures
        assert report.details["Z4"]["morphic"]
        assert not report.details["F2[x,y]/(x,y)^2"]["morphic"]

    def test_self_extensions(self, verification):
        assert verification.check_self_extensions(cap=16).passed

    def test_twisted_self_extensions(self, verification):
        report = verification.check_twisted_self_extensions()
        assert report.passed, report.failures
        details = list(report.details.values())
        assert {"sigma": "id", "left_morphic": True, "unit_regular": True, "fixes_idempotents": True} in details
        assert any(not d["fixes_idempotents"] and not d["left_morphic"] for d in details)

    def test_central_idempotents(self, verification):
        assert verification.check_central_idempotents().passed

    def test_classification(self, verification):
        report = verification.check_classification()
        assert report.passed, report.failures
        assert report.details["Z4*Z4"] is False

    def test_sigma_round_trip(self, verification):
        assert verification.check_sigma_round_trip().passed

    def test_weak_baer(self, verification):
        report = verification.check_weak_baer()
        assert report.passed, report.failures
        assert any(key.endswith("weak_baer[Z6]") for key in report.details)


class TestRun:
    """Test cases for the full suite at small sizes."""

    def test_small_suite(self, verification):
        sizes = SuiteSizes.scaled(4).model_copy(update={"ring_witness_cap": 16, "self_extension_cap": 16, "matrix_size": 2})
        suite = verification.run(sizes)
        assert suite.passed, suite.failed
        summary = suite_summary(suite)
        assert "diagonalization" in summary
        assert "partners_Z" in summary
        assert all(summary.values())
