"""
The property suite run by the `verify` command over the built-in catalog.

Each check yields a PropertyReport; a check that raises is recorded as a
failed report carrying the error, so one alarm never hides the others.
"""

from typing import Callable, Dict, List, Optional

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field

from morphic_analyser.config import Settings, get_settings
from morphic_analyser.models.algebra import FiniteRing
from morphic_analyser.models.schemas import PropertyReport, SuiteReport
from morphic_analyser.services.catalog_service import CatalogEntry, CatalogService
from morphic_analyser.services.diagonal_service import DiagonalService
from morphic_analyser.services.structure_service import StructureService
from morphic_analyser.services.torsion_service import TorsionService
from morphic_analyser.utils.spec_parser import parse_spec
from morphic_analyser.utils.validators import ValidationError, TheoremViolationError

MORPHIC_RINGS = ("Z4", "Z6", "M2(F2)", "F4")
NON_BEZOUT_RING = "F2[x,y]/(x,y)^2"


class SuiteSizes(BaseModel):
    """Sample counts and bounds of the suite."""

    ring_witness_cap: int = Field(default=256, description="Re-verify element witnesses up to this ring order")
    self_extension_cap: int = Field(default=64, description="Base order cap for R∝R checks")
    contract_bound: int = Field(default=1000, description="Denominator bound for the annihilator contracts over Z")
    contract_degree: int = Field(default=6, description="Degree bound for the annihilator contracts over F2[x]")
    partner_count: int = Field(default=10000)
    partner_bound: int = Field(default=1000)
    domain_bound: int = Field(default=500)
    domain_degree: int = Field(default=4)
    lattice_bound: int = Field(default=100)
    snf_count: int = Field(default=1000)
    snf_entry_bound: int = Field(default=100)
    diag_count: int = Field(default=1000)
    diag_witness_count: int = Field(default=100)
    diag_bound: int = Field(default=50)
    matrix_size: int = Field(default=4)

    @classmethod
    def scaled(cls, bound: int) -> "SuiteSizes":
        """A smaller suite with every torsion and matrix bound capped at bound."""
        sizes = cls()
        return sizes.model_copy(
            update={
                name: min(value, bound)
                for name, value in sizes.model_dump().items()
                if name not in ("ring_witness_cap", "self_extension_cap", "contract_degree", "domain_degree", "matrix_size")
            }
        )


class VerificationService:
    """Service running the catalog-wide property suite."""

    def __init__(self, settings: Optional[Settings] = None):
        """
        Initialize the verification service.

        Args:
            settings: Run configuration (if None, loads from environment)
        """
        self.settings = settings or get_settings()
        self.catalog = CatalogService(self.settings)
        self.structures = StructureService(self.settings)
        self.morphic = self.structures.morphic
        self.torsion = TorsionService(self.settings)
        self.diagonal = DiagonalService(self.settings)

    def _entries(self, kind: str) -> List[CatalogEntry]:
        return [entry for entry in self.catalog.catalog() if entry.kind == kind]

    def _ring(self, name: str) -> FiniteRing:
        return self.catalog.build_ring(self.catalog.entry(name).spec)

    def _run(self, suite: SuiteReport, name: str, check: Callable[[], PropertyReport]) -> None:
        logger.info(f"Running check {name}")
        try:
            report = check()
        except (TheoremViolationError, ValidationError) as e:
            logger.error(f"Check {name} raised: {e}")
            report = PropertyReport(name=name, passed=False, failures=[{"error": str(e)}])
        except Exception as e:
            logger.exception(f"Check {name} crashed")
            report = PropertyReport(name=name, passed=False, failures=[{"error": f"{type(e).__name__}: {e}"}])
        suite.reports[name] = report
        if not report.passed:
            logger.warning(f"Check {name} failed: {report.failures[:3]}")

    def run(self, sizes: Optional[SuiteSizes] = None) -> SuiteReport:
        """Run every check of the suite."""
        sizes = sizes or SuiteSizes()
        suite = SuiteReport()
        integers = self.torsion.domain("Z")
        binary = self.torsion.domain("GF(2)")

        self._run(suite, "ring_axioms", self.check_ring_axioms)
        self._run(suite, "ring_equivalences", lambda: self.check_ring_equivalences(sizes.ring_witness_cap))
        self._run(suite, "annihilator_characterization", self.check_annihilator_characterization)
        self._run(suite, "self_extension", lambda: self.check_self_extensions(sizes.self_extension_cap))
        self._run(suite, "twisted_self_extension", self.check_twisted_self_extensions)
        self._run(suite, "central_idempotents", self.check_central_idempotents)
        self._run(suite, "classification", self.check_classification)
        self._run(suite, "sigma_round_trip", self.check_sigma_round_trip)
        self._run(suite, "lattice_map", self.check_lattice_maps)
        self._run(suite, "extension_structure", self.check_extension_structure)
        self._run(suite, "regular_rings", self.check_regular_rings)
        self._run(suite, "boolean_twists", lambda: self._merge("boolean_twists", [self.morphic.verify_boolean_twists(k) for k in (1, 2, 3)]))
        self._run(suite, "weak_baer", self.check_weak_baer)

        self._run(suite, "contracts_Z", lambda: self.torsion.verify_annihilator_contracts(integers, sizes.contract_bound))
        self._run(suite, "contracts_F2x", lambda: self.torsion.verify_annihilator_contracts(binary, sizes.contract_degree))
        self._run(suite, "partners_Z", lambda: self.torsion.verify_partners(integers, sizes.partner_count, sizes.partner_bound))
        self._run(suite, "domain_conditions_Z", lambda: self.torsion.verify_domain_conditions(integers, sizes.domain_bound))
        self._run(suite, "domain_conditions_F2x", lambda: self.torsion.verify_domain_conditions(binary, sizes.domain_degree))
        self._run(suite, "lattice_bijection_Z", lambda: self.torsion.lattice_bijection_sample(integers, sizes.lattice_bound))
        self._run(suite, "lattice_bijection_F2x", lambda: self.torsion.lattice_bijection_sample(binary, sizes.domain_degree))
        self._run(suite, "no_faithful_element", lambda: self.torsion.verify_no_faithful_element(integers, sizes.domain_bound))

        self._run(
            suite,
            "smith_normal_form",
            lambda: self.diagonal.verify_smith_suite(sizes.snf_count, sizes.matrix_size, sizes.snf_entry_bound),
        )
        self._run(
            suite,
            "diagonalization",
            lambda: self.diagonal.verify_diagonalization_suite(
                sizes.diag_count, sizes.diag_witness_count, sizes.matrix_size, sizes.diag_bound
            ),
        )
        logger.info(f"Suite finished: passed={suite.passed} failed={suite.failed}")
        return suite

    @staticmethod
    def _merge(name: str, reports: List[PropertyReport]) -> PropertyReport:
        merged = PropertyReport(name=name)
        for index, report in enumerate(reports):
            merged.checked += report.checked
            merged.sampled |= report.sampled
            for failure in report.failures:
                merged.fail(**{**failure, "report": report.name})
            if not report.passed and not report.failures:
                merged.fail(report=report.name)
            merged.details[f"{index}:{report.name}"] = report.details
        return merged

    # Finite-ring checks

    def check_ring_axioms(self) -> PropertyReport:
        report = PropertyReport(name="ring_axioms")
        for entry in self.catalog.catalog():
            outcome = self.catalog.rings.verify_ring_axioms(self.catalog.build_ring(entry.spec))
            report.check(outcome.passed, entry=entry.name, failures=outcome.failures)
        return report

    def check_ring_equivalences(self, witness_cap: int) -> PropertyReport:
        """morphic iff quasi-morphic iff Bézout on both sides, with the expected verdicts."""
        report = PropertyReport(name="ring_equivalences")
        for entry in self._entries("ring"):
            ring = self.catalog.build_ring(entry.spec)
            if ring.order > self.settings.full_scan_cap:
                continue
            properties = self.morphic.ring_properties(ring, allow_sampling=False)
            report.check(
                properties.morphic == properties.quasi_morphic == properties.bezout,
                entry=entry.name,
                morphic=properties.morphic,
                quasi_morphic=properties.quasi_morphic,
                bezout=properties.bezout,
            )
            report.details[entry.name] = {"morphic": properties.morphic, "unit_regular": properties.unit_regular}
            if entry.name in MORPHIC_RINGS:
                report.check(properties.morphic, entry=entry.name, expected="morphic")
            if entry.name == NON_BEZOUT_RING:
                report.check(
                    not (properties.morphic or properties.quasi_morphic or properties.bezout),
                    entry=entry.name,
                    expected="not morphic, not quasi-morphic, not Bezout",
                )
            if properties.morphic and ring.order <= witness_cap:
                for a in range(ring.order):
                    report.check(self.morphic.morphic_witness(ring, a, "two-sided") is not None, entry=entry.name, element=a)
        return report

    def check_annihilator_characterization(self) -> PropertyReport:
        return self._merge(
            "annihilator_characterization",
            [
                self.morphic.verify_annihilator_characterization(self.catalog.build_extension(self.catalog.entry(name).spec))
                for name in ("Z4*Z4", "F2xF2*regular")
            ],
        )

    def check_self_extensions(self, cap: int) -> PropertyReport:
        """R∝R left morphic iff R unit regular, over the catalog rings within cap."""
        reports = []
        for entry in self._entries("ring"):
            ring = self.catalog.build_ring(entry.spec)
            if ring.order <= cap:
                outcome = self.morphic.verify_self_extension(ring)
                outcome.name = f"self_extension[{entry.name}]"
                reports.append(outcome)
        merged = self._merge("self_extension", reports)
        by_name = {r.name: r.details for r in reports}
        merged.check(by_name["self_extension[Z4]"]["counterexample"] == {"r": 0, "m": 2}, expected="Z4*Z4 fails at (0,2)")
        merged.check(by_name["self_extension[M2(F2)]"]["morphic"], expected="M2(F2)*M2(F2) morphic")
        return merged

    def check_twisted_self_extensions(self) -> PropertyReport:
        """R∝R(sigma) left morphic only over unit regular R, over every catalog twist and the Boolean endomorphisms."""
        reports = []
        for entry in self._entries("extension"):
            module = parse_spec(entry.spec).args[1]
            if module.kind != "Twist":
                continue
            ring = self.catalog.build_ring(module.args[0])
            outcome = self.morphic.verify_twisted_self_extension(ring, self.catalog.endomorphism(ring, module.args[1]))
            outcome.name = f"twisted_self_extension[{entry.name}]"
            reports.append(outcome)
        for k in (1, 2, 3):
            ring, morphisms = self.morphic.boolean_endomorphisms(k)
            reports.extend(self.morphic.verify_twisted_self_extension(ring, sigma) for sigma in morphisms)
        return self._merge("twisted_self_extension", reports)

    def check_central_idempotents(self) -> PropertyReport:
        swap = self.morphic.verify_central_idempotent_commutation(self.catalog.build_extension(self.catalog.entry("F2xF2*swap").spec))
        identity = self.morphic.verify_central_idempotent_commutation(self.catalog.build_extension(self.catalog.entry("F2xF2*id").spec))
        merged = self._merge("central_idempotents", [swap, identity])
        merged.check(not swap.details["left_morphic"], expected="swap twist not left morphic")
        merged.check({"e": 2, "m": 1} in swap.details["commutation_failures"], expected="e=(1,0) pinpointed")
        merged.check(identity.details["left_morphic"], expected="identity twist morphic")
        return merged

    def check_classification(self) -> PropertyReport:
        """Block classification against brute force on every catalog pair."""
        report = PropertyReport(name="classification")
        for entry in self._entries("extension"):
            extension = self.catalog.build_extension(entry.spec)
            outcome = self.structures.reconcile(extension.base, extension.bimodule)
            report.check(
                outcome.passed,
                entry=entry.name,
                predicted=outcome.predicted_morphic,
                brute_force=outcome.brute_force_morphic,
            )
            report.details[entry.name] = outcome.brute_force_morphic
        report.check(report.details.get("M2(F2)*conj") is True, expected="conj twist morphic")
        report.check(report.details.get("Z4*Z4") is False, expected="Z4*Z4 not morphic")
        return report

    def check_sigma_round_trip(self) -> PropertyReport:
        extension = self.catalog.build_extension(self.catalog.entry("F4*F4(frobenius)").spec)
        construction = self.structures.construct_sigma(extension.bimodule, 1)
        frobenius = self.catalog.rings.frobenius(extension.base)
        report = PropertyReport(name="sigma_round_trip")
        report.check(bool(np.array_equal(construction.sigma.image, frobenius.image)), check="sigma = frobenius")
        report.check(construction.is_automorphism, check="automorphism")
        return report

    def check_lattice_maps(self) -> PropertyReport:
        report = PropertyReport(name="lattice_map")
        for entry in self._entries("extension"):
            extension = self.catalog.build_extension(entry.spec)
            if not self.morphic.is_morphic_ring(extension.as_ring):
                continue
            lattice = self.structures.build_lattice_map(extension)
            report.check(lattice.passed, entry=entry.name, violations=lattice.violations[:5])
        return report

    def check_extension_structure(self) -> PropertyReport:
        """Corners, radical, fundamental corollary, cyclicity and finite-length consequences."""
        reports = []
        for entry in self._entries("extension"):
            extension = self.catalog.build_extension(entry.spec)
            reports.append(self.structures.extensions.verify_idempotent_corner_ring(extension))
            reports.append(self.structures.extensions.verify_radical_extension(extension))
            reports.append(self.structures.verify_fundamental_corollary(extension))
            reports.append(self.structures.verify_left_module_cyclic(extension))
            S = extension.as_ring
            if all(self.morphic.scan_quasi_morphic(S, side)[0] for side in ("left", "right")):
                reports.append(self.structures.verify_cyclic_finite_length(extension))
        return self._merge("extension_structure", reports)

    def check_regular_rings(self) -> PropertyReport:
        """Elementwise unit-regularity, the twist criteria and the morphic transfers."""
        reports = [self.morphic.verify_ehrlich(self.catalog.build_ring(entry.spec)) for entry in self._entries("ring")]
        f4 = self._ring("F4")
        reports.append(self.morphic.verify_gencz(f4, self.catalog.rings.frobenius(f4)))
        boolean = self._ring("F2xF2")
        for sigma in (self.catalog.rings.identity_morphism(boolean), self.catalog.rings.coordinate_swap(boolean)):
            reports.append(self.morphic.verify_strongly_regular_twist(boolean, sigma))
        m2 = self._ring("M2(F2)")
        reports.append(self.morphic.verify_rl_transfer(m2, 8))
        return self._merge("regular_rings", reports)

    def check_weak_baer(self) -> PropertyReport:
        reports = []
        for entry in self._entries("ring"):
            ring = self.catalog.build_ring(entry.spec)
            if ring.is_commutative:
                outcome = self.torsion.weak_baer_bezout_witness(ring)
                outcome.name = f"weak_baer[{entry.name}]"
                reports.append(outcome)
        return self._merge("weak_baer", reports)


def suite_summary(suite: SuiteReport) -> Dict[str, bool]:
    """Check name -> passed."""
    return {name: report.passed for name, report in sorted(suite.reports.items())}
