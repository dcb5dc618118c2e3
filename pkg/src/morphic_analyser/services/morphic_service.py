"""
Element- and ring-level morphic analysis.

An element a is left morphic when some b has ann_l(a) = Rb and ann_l(b) = Ra.
A partner b always generates ann_l(a), so the search over the generators of
ann_l(a) is complete. Quasi-morphic relaxes the second equality to some c
with ann_l(c) = Ra; such a c lies in ann_r(a).
"""

from typing import List, Optional, Tuple

import numpy as np
from loguru import logger

from morphic_analyser.config import Settings, get_settings
from morphic_analyser.models.algebra import FiniteRing, RingMorphism, SubsetHandle, TrivialExtensionRing
from morphic_analyser.models.schemas import (
    AnnihilatorCharacterization,
    MorphicWitness,
    PropertyReport,
    QuasiMorphicWitness,
    RegularityVerdict,
    RingReport,
)
from morphic_analyser.services.bimodule_service import BimoduleService, module_oracle
from morphic_analyser.services.extension_service import ExtensionService
from morphic_analyser.services.ring_service import RingService, ring_oracle
from morphic_analyser.utils import bitsets
from morphic_analyser.utils.validators import CapExceededError, PreconditionError, TheoremViolationError, Validators

# (holds, first failing element, sampled)
ScanResult = Tuple[bool, Optional[int], bool]

_OTHER_SIDE = {"left": "right", "right": "left"}


class MorphicService:
    """Service deciding morphic, quasi-morphic and regularity properties."""

    def __init__(self, settings: Optional[Settings] = None):
        """
        Initialize the morphic service.

        Args:
            settings: Run configuration (if None, loads from environment)
        """
        self.settings = settings or get_settings()
        self.rings = RingService(self.settings)
        self.bimodules = BimoduleService(self.settings)
        self.extensions = ExtensionService(self.settings)

    # Witnesses

    def morphic_partners_all(self, ring: FiniteRing, a: int, side: str = "left") -> List[int]:
        """Every b (ascending) with ann(a) = Rb and ann(b) = Ra on the given side."""
        Validators.require(Validators.validate_index(a, ring.order), PreconditionError)
        if side == "two-sided":
            right = set(self.morphic_partners_all(ring, a, "right"))
            return [b for b in self.morphic_partners_all(ring, a, "left") if b in right]

        oracle = ring_oracle(ring)
        target = oracle.principal(a, side)
        return [
            b
            for b in oracle.generators(oracle.annihilator(a, side), side)
            if oracle.annihilator(b, side) == target
        ]

    def _has_partner(self, ring: FiniteRing, a: int, side: str) -> bool:
        oracle = ring_oracle(ring)
        target = oracle.principal(a, side)
        return any(
            oracle.annihilator(b, side) == target
            for b in oracle.generators(oracle.annihilator(a, side), side)
        )

    def _certify(self, ring: FiniteRing, a: int, b: int, side: str) -> Tuple[SubsetHandle, SubsetHandle]:
        """Recompute both equalities straight from the table."""
        mul, zero, n = ring.mul_table, ring.zero, ring.order
        if side == "left":
            ann_a, gen_a = mul[:, a] == zero, mul[:, a]
            ann_b, gen_b = mul[:, b] == zero, mul[:, b]
            role = "left_ideal"
        else:
            ann_a, gen_a = mul[a, :] == zero, mul[a, :]
            ann_b, gen_b = mul[b, :] == zero, mul[b, :]
            role = "right_ideal"

        ann_a, ann_b = bitsets.from_bool_array(ann_a), bitsets.from_bool_array(ann_b)
        if ann_a != bitsets.from_index_array(gen_b, n) or ann_b != bitsets.from_index_array(gen_a, n):
            logger.error(f"Witness {b} for {a} ({side}) does not re-verify")
            raise TheoremViolationError(f"Morphic witness {b} for element {a} failed certification on the {side}")
        return SubsetHandle.create(ring, ann_a, role), SubsetHandle.create(ring, ann_b, role)

    def morphic_witness(self, ring: FiniteRing, a: int, side: str = "left") -> Optional[MorphicWitness]:
        """
        Least-index morphic partner of a, certified.

        Args:
            ring: Ambient ring
            a: Element index
            side: "left", "right" or "two-sided" (one b serving both sides)

        Returns:
            Optional[MorphicWitness]: None after a complete search finds no partner

        Raises:
            TheoremViolationError: If a found partner fails independent re-verification
        """
        partners = self.morphic_partners_all(ring, a, side)
        if not partners:
            return None
        b = partners[0]
        ann_a, ann_b = self._certify(ring, a, b, "left" if side == "two-sided" else side)
        if side == "two-sided":
            self._certify(ring, a, b, "right")
        return MorphicWitness(element=a, partner=b, side=side, ann_a=ann_a, ann_b=ann_b)

    def left_morphic_witness(self, ring: FiniteRing, a: int) -> Optional[MorphicWitness]:
        return self.morphic_witness(ring, a, "left")

    def right_morphic_witness(self, ring: FiniteRing, a: int) -> Optional[MorphicWitness]:
        return self.morphic_witness(ring, a, "right")

    def quasi_morphic_witness(self, ring: FiniteRing, a: int, side: str = "left") -> Optional[QuasiMorphicWitness]:
        """
        b generating ann(a) and the least c with ann(c) = Ra.

        On the left c ranges over ann_r(a); on the right over ann_l(a).
        """
        Validators.require(Validators.validate_index(a, ring.order), PreconditionError)
        oracle = ring_oracle(ring)
        generators = oracle.generators(oracle.annihilator(a, side), side)
        if not generators:
            return None
        b = generators[0]

        target = oracle.principal(a, side)
        for c in bitsets.members(oracle.annihilator(a, _OTHER_SIDE[side])):
            if oracle.annihilator(c, side) == target:
                return QuasiMorphicWitness(element=a, generator=b, co_element=c, side=side, coincide=b == c)
        return None

    def regularity(self, ring: FiniteRing, a: int) -> RegularityVerdict:
        """Least x with axa = a, then the least unit u with aua = a."""
        Validators.require(Validators.validate_index(a, ring.order), PreconditionError)
        mul = ring.mul_table
        hits = mul[mul[a, :], a] == a
        if not hits.any():
            return RegularityVerdict(element=a, status="not_regular")
        inner = int(np.argmax(hits))
        unit_hits = hits & ring_oracle(ring).units
        if unit_hits.any():
            return RegularityVerdict(element=a, status="unit_regular", inner_inverse=inner, unit=int(np.argmax(unit_hits)))
        return RegularityVerdict(element=a, status="regular", inner_inverse=inner)

    # Ring-level scans

    def scan_elements(self, ring: FiniteRing, allow_sampling: bool = True) -> Tuple[np.ndarray, bool]:
        """
        Elements a full scan visits: all of them up to full_scan_cap, a seeded sample above.

        Raises:
            CapExceededError: If the ring is above the cap and sampling is not allowed
        """
        cap = self.settings.full_scan_cap
        if ring.order <= cap:
            return np.arange(ring.order), False
        if not allow_sampling:
            Validators.require(Validators.validate_order(ring.order, cap, "Scanned ring"), CapExceededError)
        rng = np.random.default_rng(self.settings.seed)
        count = min(self.settings.sample_count, ring.order)
        sample = np.sort(rng.choice(ring.order, size=count, replace=False))
        logger.warning(f"Ring of order {ring.order} above full-scan cap; scanning {count} sampled elements")
        return sample, True

    def scan_morphic(self, ring: FiniteRing, side: str = "left", allow_sampling: bool = True) -> ScanResult:
        """Is every scanned element morphic on the side? Sides: left, right, two-sided."""
        elements, sampled = self.scan_elements(ring, allow_sampling)
        sides = ("left", "right") if side == "two-sided" else (side,)
        for a in elements:
            a = int(a)
            if not all(self._has_partner(ring, a, s) for s in sides):
                return False, a, sampled
        return True, None, sampled

    def scan_quasi_morphic(self, ring: FiniteRing, side: str = "left", allow_sampling: bool = True) -> ScanResult:
        elements, sampled = self.scan_elements(ring, allow_sampling)
        oracle = ring_oracle(ring)
        if oracle.dense:
            annihilators = {oracle.annihilator(c, side) for c in range(ring.order)}
            principals = oracle.principal_masks(side)
            for a in elements:
                a = int(a)
                if oracle.annihilator(a, side) not in principals or oracle.principal(a, side) not in annihilators:
                    return False, a, sampled
            return True, None, sampled
        for a in elements:
            if self.quasi_morphic_witness(ring, int(a), side) is None:
                return False, int(a), sampled
        return True, None, sampled

    def _regular_flags(self, ring: FiniteRing, elements: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Per scanned element: regular, unit regular."""
        mul = ring.mul_table
        units = ring_oracle(ring).units
        regular = np.zeros(len(elements), dtype=bool)
        unit_regular = np.zeros(len(elements), dtype=bool)
        for start in range(0, len(elements), 512):
            chunk = elements[start:start + 512]
            hits = mul[mul[chunk, :], chunk[:, None]] == chunk[:, None]
            regular[start:start + len(chunk)] = hits.any(axis=1)
            unit_regular[start:start + len(chunk)] = (hits & units[None, :]).any(axis=1)
        return regular, unit_regular

    def is_left_morphic_ring(self, ring: FiniteRing) -> bool:
        return self.scan_morphic(ring, "left")[0]

    def is_morphic_ring(self, ring: FiniteRing) -> bool:
        return self.scan_morphic(ring, "two-sided")[0]

    def ring_properties(self, ring: FiniteRing, allow_sampling: bool = True) -> RingReport:
        """
        Full property report of a finite ring.

        Args:
            ring: Ring to analyse
            allow_sampling: Scan a seeded sample above full_scan_cap instead of raising

        Returns:
            RingReport: Flags plus the first counterexample of every failing property

        Raises:
            CapExceededError: If the ring exceeds full_scan_cap and sampling is disallowed
        """
        logger.info(f"Analysing ring {ring.describe()} of order {ring.order}")
        structure = self.rings.units_idempotents_radical(ring)
        elements, sampled = self.scan_elements(ring, allow_sampling)
        counterexamples = {}
        flags = {}

        for side in ("left", "right"):
            holds, witness, _ = self.scan_morphic(ring, side, allow_sampling)
            flags[f"{side}_morphic"] = holds
            if witness is not None:
                counterexamples[f"{side}_morphic"] = witness

            holds, witness, _ = self.scan_quasi_morphic(ring, side, allow_sampling)
            flags[f"{side}_quasi_morphic"] = holds
            if witness is not None:
                counterexamples[f"{side}_quasi_morphic"] = witness

            verdict = self.bimodules.is_bezout(ring, side, elements=elements.tolist() if sampled else None)
            flags[f"{side}_bezout"] = verdict.holds
            if verdict.counterexample is not None:
                counterexamples[f"{side}_bezout"] = list(verdict.counterexample)

        regular, unit_regular = self._regular_flags(ring, elements)
        for name, column in (("regular", regular), ("unit_regular", unit_regular)):
            flags[name] = bool(column.all())
            if not flags[name]:
                counterexamples[name] = int(elements[np.argmin(column)])

        square_zero = np.flatnonzero(np.diagonal(ring.mul_table) == ring.zero)
        nilpotent = [int(x) for x in square_zero if x != ring.zero]
        flags["reduced"] = not nilpotent
        if nilpotent:
            counterexamples["reduced"] = nilpotent[0]

        semisimple = structure.jacobson_radical == [ring.zero]
        nonunits = sorted(set(range(ring.order)) - set(structure.units))
        report = RingReport(
            **structure.model_dump(),
            **flags,
            description=ring.describe(),
            semisimple=semisimple,
            simple=semisimple and len(structure.primitive_central_idempotents) == 1,
            local=ring.order > 1 and nonunits == structure.jacobson_radical,
            sampled=sampled,
            counterexamples=counterexamples,
        )
        logger.info(f"Ring {ring.describe()}: morphic={report.morphic} bezout={report.bezout} unit_regular={report.unit_regular}")
        return report

    # Trivial-extension characterizations

    def check_annihilator_characterization(
        self, extension: TrivialExtensionRing, a: int, m: int, n: int
    ) -> AnnihilatorCharacterization:
        """
        Evaluate both sides of the annihilator equivalences for (a, m, n).

        (A) ann_l^S(0,m) = S(a,n)  iff  ann_l^R(m) = Ra and ann_l^R(a)n + Ma = M
        (B) ann_l^S(a,n) = S(0,m)  iff  ann_l^M(a) = Rm, ann_l^R(a)n ∩ Ma = 0
                                        and ann_l^R(a) ∩ ann_l^R(n) = 0
        """
        ring, module, S = extension.base, extension.bimodule, extension.as_ring
        Validators.require(Validators.validate_index(a, ring.order, "Ring element"), PreconditionError)
        for x in (m, n):
            Validators.require(Validators.validate_index(x, module.order, "Module element"), PreconditionError)

        s_oracle, r_oracle, m_oracle = ring_oracle(S), ring_oracle(ring), module_oracle(module)
        zero_m, an = extension.encode(ring.zero, m), extension.encode(a, n)

        ann_a = r_oracle.left_annihilator(a)
        ann_a_n = np.unique(module.left_action[bitsets.member_array(ann_a, ring.order), n])
        m_a = np.unique(module.right_action[:, a])
        sum_mask = bitsets.from_index_array(module.add_table[np.ix_(ann_a_n, m_a)], module.order)
        meet_mask = bitsets.from_index_array(ann_a_n, module.order) & bitsets.from_index_array(m_a, module.order)

        a2 = m_oracle.ring_left_annihilators[m] == r_oracle.left_principal(a) and sum_mask == bitsets.full(module.order)
        b2 = (
            m_oracle.module_left_annihilators[a] == m_oracle.left_cyclic[m]
            and meet_mask == 1 << module.zero
            and ann_a & m_oracle.ring_left_annihilators[n] == 1 << ring.zero
        )
        return AnnihilatorCharacterization(
            a=a,
            m=m,
            n=n,
            a1=s_oracle.left_annihilator(zero_m) == s_oracle.left_principal(an),
            a2=a2,
            b1=s_oracle.left_annihilator(an) == s_oracle.left_principal(zero_m),
            b2=b2,
        )

    def verify_annihilator_characterization(self, extension: TrivialExtensionRing) -> PropertyReport:
        """Both biconditionals over every triple (a, m, n)."""
        report = PropertyReport(name="annihilator_characterization")
        counts = {"a1": 0, "b1": 0}
        for a in range(extension.base.order):
            for m in range(extension.bimodule.order):
                for n in range(extension.bimodule.order):
                    outcome = self.check_annihilator_characterization(extension, a, m, n)
                    counts["a1"] += outcome.a1
                    counts["b1"] += outcome.b1
                    report.check(outcome.consistent, **outcome.model_dump(exclude={"consistent"}))
        report.details.update(counts)
        return report

    def verify_rl_transfer(self, ring: FiniteRing, a: int) -> PropertyReport:
        """
        For a two-sided morphic a, every left witness b has aR = ann_r(b) and bR = ann_r(a).

        Raises:
            PreconditionError: If a is not morphic on both sides
        """
        if not (self._has_partner(ring, a, "left") and self._has_partner(ring, a, "right")):
            raise PreconditionError(f"Element {a} is not two-sided morphic")
        oracle = ring_oracle(ring)
        report = PropertyReport(name="rl_transfer")
        for b in self.morphic_partners_all(ring, a, "left"):
            report.check(
                oracle.right_annihilator(b) == oracle.right_principal(a)
                and oracle.right_annihilator(a) == oracle.right_principal(b),
                element=a,
                partner=b,
            )
        return report

    def verify_gencz(self, ring: FiniteRing, sigma: RingMorphism) -> PropertyReport:
        """
        If (a,0) is morphic in R∝R(sigma) then a is morphic in R; for an
        automorphism sigma the left-only implication is checked as well.
        """
        extension = self.extensions.skew_poly_quotient(ring, sigma)
        S = extension.as_ring
        report = PropertyReport(name="gencz", details={"sigma": sigma.name, "automorphism": sigma.is_automorphism})
        for a in range(ring.order):
            lifted = extension.encode(a, ring.zero)
            left_s = self._has_partner(S, lifted, "left")
            right_s = self._has_partner(S, lifted, "right")
            left_r = self._has_partner(ring, a, "left")
            right_r = self._has_partner(ring, a, "right")
            report.check(not (left_s and right_s) or (left_r and right_r), element=a, implication="two-sided")
            if sigma.is_automorphism:
                report.check(not left_s or left_r, element=a, implication="left")
        return report

    def verify_central_idempotent_commutation(self, extension: TrivialExtensionRing) -> PropertyReport:
        """
        Left morphic S forces em = me for central idempotents e of the base.

        Every failing e is recorded with its least m; a failure implies S is
        not left morphic.
        """
        ring, module = extension.base, extension.bimodule
        oracle = ring_oracle(ring)
        left_morphic = self.is_left_morphic_ring(extension.as_ring)
        report = PropertyReport(name="central_idempotent_commutation", details={"left_morphic": left_morphic})

        pairs = []
        for e in np.flatnonzero(oracle.idempotents & oracle.central):
            bad = module.left_action[e, :] != module.right_action[:, e]
            if bad.any():
                pairs.append({"e": int(e), "m": int(np.argmax(bad))})
        report.details["commutation_failures"] = pairs
        for pair in pairs:
            report.check(not left_morphic, **pair)
        if not pairs:
            report.checked += 1
        return report

    def verify_ehrlich(self, ring: FiniteRing) -> PropertyReport:
        """Elementwise: unit regular iff (regular and left morphic)."""
        report = PropertyReport(name="ehrlich")
        elements, sampled = self.scan_elements(ring)
        report.sampled = sampled
        regular, unit_regular = self._regular_flags(ring, elements)
        for a, reg, ureg in zip(elements.tolist(), regular, unit_regular):
            report.check(bool(ureg) == (bool(reg) and self._has_partner(ring, a, "left")), element=a)
        return report

    def boolean_endomorphisms(self, k: int) -> Tuple[FiniteRing, List[RingMorphism]]:
        """F_2^k with every unital endomorphism (one per map of coordinates)."""
        if not 1 <= k <= 3:
            raise PreconditionError("Boolean twists are enumerated for 1 <= k <= 3")
        ring = self.rings.build_cyclic(2)
        for _ in range(k - 1):
            ring = self.rings.build_product(ring, self.rings.build_cyclic(2))

        # bit t of an index (most significant first) is coordinate t
        digits = _bits(ring.order, k)
        weights = 1 << np.arange(k - 1, -1, -1)
        morphisms = []
        for choice in np.ndindex(*([k] * k)):
            image = digits[:, list(choice)] @ weights
            name = "id" if list(choice) == list(range(k)) else f"coords{list(choice)}"
            morphisms.append(self.rings.check_morphism(ring, ring, image, name=name))
        return ring, morphisms

    def verify_boolean_twists(self, k: int) -> PropertyReport:
        """R∝R(sigma) over R = F_2^k is left morphic exactly when sigma is the identity."""
        ring, morphisms = self.boolean_endomorphisms(k)
        report = PropertyReport(name="boolean_twists", details={"k": k, "endomorphisms": len(morphisms)})
        for sigma in morphisms:
            extension = self.extensions.skew_poly_quotient(ring, sigma)
            left_morphic = self.is_left_morphic_ring(extension.as_ring)
            report.check(left_morphic == sigma.is_identity, sigma=sigma.name, left_morphic=left_morphic)
        return report

    def verify_strongly_regular_twist(self, ring: FiniteRing, sigma: RingMorphism) -> PropertyReport:
        """
        Over a strongly regular R, R∝R(sigma) is left morphic iff sigma fixes every idempotent.

        Raises:
            PreconditionError: If R is not reduced and regular
        """
        elements = np.arange(ring.order)
        regular, _ = self._regular_flags(ring, elements)
        square_zero = np.flatnonzero(np.diagonal(ring.mul_table) == ring.zero)
        if not regular.all() or len(square_zero) > 1:
            raise PreconditionError("Ring is not strongly regular")

        idempotents = np.flatnonzero(ring_oracle(ring).idempotents)
        fixes = bool((sigma.image[idempotents] == idempotents).all())
        left_morphic = self.is_left_morphic_ring(self.extensions.skew_poly_quotient(ring, sigma).as_ring)
        report = PropertyReport(name="strongly_regular_twist", details={"fixes_idempotents": fixes, "left_morphic": left_morphic})
        report.check(fixes == left_morphic, sigma=sigma.name)
        return report

    def verify_self_extension(self, ring: FiniteRing) -> PropertyReport:
        """
        R∝R left morphic iff R unit regular iff every (0,a) is left morphic iff R∝R morphic.
        """
        extension = self.extensions.build_trivial_extension(ring, self.bimodules.regular_bimodule(ring))
        S = extension.as_ring
        left_morphic, counterexample, sampled = self.scan_morphic(S, "left")
        unit_regular = bool(self._regular_flags(ring, np.arange(ring.order))[1].all())
        module_part = all(self._has_partner(S, i, "left") for i in extension.module_ideal)
        two_sided = self.is_morphic_ring(S)

        report = PropertyReport(
            name="self_extension",
            sampled=sampled,
            details={
                "left_morphic": left_morphic,
                "unit_regular": unit_regular,
                "module_elements_left_morphic": module_part,
                "morphic": two_sided,
                "counterexample": extension.render(counterexample) if counterexample is not None else None,
            },
        )
        report.check(left_morphic == unit_regular, identity="left morphic iff unit regular")
        report.check(left_morphic == module_part, identity="left morphic iff every (0,a) left morphic")
        report.check(left_morphic == two_sided, identity="left morphic iff morphic")
        return report

    def verify_twisted_self_extension(self, ring: FiniteRing, sigma: RingMorphism) -> PropertyReport:
        """
        R∝R(sigma) left morphic forces R unit regular; when sigma fixes every
        idempotent the converse holds too.
        """
        S = self.extensions.skew_poly_quotient(ring, sigma).as_ring
        left_morphic = self.is_left_morphic_ring(S)
        unit_regular = bool(self._regular_flags(ring, np.arange(ring.order))[1].all())
        idempotents = np.flatnonzero(ring_oracle(ring).idempotents)
        fixes = bool((sigma.image[idempotents] == idempotents).all())

        report = PropertyReport(
            name="twisted_self_extension",
            details={"sigma": sigma.name, "left_morphic": left_morphic, "unit_regular": unit_regular, "fixes_idempotents": fixes},
        )
        report.check(not left_morphic or unit_regular, sigma=sigma.name, implication="left morphic implies unit regular")
        if fixes:
            report.check(left_morphic == unit_regular, sigma=sigma.name, identity="left morphic iff unit regular")
        return report


def _bits(count: int, width: int) -> np.ndarray:
    weights = 1 << np.arange(width - 1, -1, -1)
    return ((np.arange(count)[:, None] & weights[None, :]) > 0).astype(np.int64)
