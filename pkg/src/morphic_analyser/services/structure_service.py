"""
Structural objects attached to a morphic trivial extension R∝M: the
annihilator lattice map, the endomorphism sigma presenting a cyclic M as
R̄(sigma), and the block classification of morphic extensions.
"""

from typing import List, Optional

import numpy as np
from loguru import logger

from morphic_analyser.config import Settings, get_settings
from morphic_analyser.models.algebra import (
    FiniteBimodule,
    FiniteRing,
    SigmaConstruction,
    SubsetHandle,
    TrivialExtensionRing,
)
from morphic_analyser.models.schemas import (
    ClassificationVerdict,
    FactorVerdict,
    LatticeEntry,
    LatticeMap,
    PropertyReport,
    ReconcileReport,
    SigmaSummary,
)
from morphic_analyser.services.bimodule_service import module_oracle
from morphic_analyser.services.morphic_service import MorphicService
from morphic_analyser.services.ring_service import ring_oracle
from morphic_analyser.utils import bitsets
from morphic_analyser.utils.validators import (
    MorphismError,
    PreconditionError,
    TheoremViolationError,
    ValidationError,
    Validators,
)


class StructureService:
    """Service building lattice maps, sigma presentations and classifications."""

    def __init__(self, settings: Optional[Settings] = None):
        """
        Initialize the structure service.

        Args:
            settings: Run configuration (if None, loads from environment)
        """
        self.settings = settings or get_settings()
        self.morphic = MorphicService(self.settings)
        self.rings = self.morphic.rings
        self.bimodules = self.morphic.bimodules
        self.extensions = self.morphic.extensions

    # Lattice map

    def build_lattice_map(self, extension: TrivialExtensionRing, strict: bool = True) -> LatticeMap:
        """
        The map mR -> ann_l^R(m) from cyclic right submodules of M to left ideals of R.

        Args:
            extension: R∝M
            strict: Require S to be morphic and raise on a non-principal image;
                with strict=False injectivity is only reported

        Returns:
            LatticeMap: Entries with generators and the property flags

        Raises:
            PreconditionError: If strict and S is not morphic
            TheoremViolationError: If strict and some image is not a principal left ideal
        """
        ring, module = extension.base, extension.bimodule
        if strict:
            holds, counterexample, _ = self.morphic.scan_morphic(extension.as_ring, "two-sided")
            if not holds:
                raise PreconditionError(f"Extension is not morphic at {extension.render(counterexample)}")

        m_oracle, r_oracle = module_oracle(module), ring_oracle(ring)
        lattice = LatticeMap(strict=strict)
        images, leads = {}, {}
        for mask, least in sorted(m_oracle.principal_masks("right").items(), key=lambda item: item[1]):
            generators = m_oracle.generators(mask, "right")
            image = m_oracle.ring_left_annihilators[generators[0]]
            if any(m_oracle.ring_left_annihilators[g] != image for g in generators):
                lattice.well_defined = False
                lattice.violations.append({"kind": "well_defined", "generator": generators[0]})

            ring_generators = r_oracle.generators(image, "left")
            if not ring_generators:
                lattice.all_principal = False
                lattice.violations.append({"kind": "not_principal", "generator": generators[0]})
                if strict:
                    logger.error(f"ann_l^R({generators[0]}) is not a principal left ideal")
                    raise TheoremViolationError(f"Annihilator of module element {generators[0]} is not principal")

            try:
                SubsetHandle.create(module, mask, "sub_bimodule")
                is_sub_bimodule = True
            except ValidationError:
                is_sub_bimodule = False
            image_is_ideal = None
            if is_sub_bimodule:
                try:
                    SubsetHandle.create(ring, image, "ideal")
                    image_is_ideal = True
                except ValidationError:
                    image_is_ideal = False
                    lattice.violations.append({"kind": "image_not_ideal", "generator": generators[0]})

            images[mask], leads[mask] = image, least
            lattice.entries.append(
                LatticeEntry(
                    submodule=SubsetHandle.create(module, mask, "right_submodule"),
                    image=SubsetHandle.create(ring, image, "left_ideal"),
                    module_generator=generators[0],
                    ring_generator=ring_generators[0] if ring_generators else None,
                    is_sub_bimodule=is_sub_bimodule,
                    image_is_ideal=image_is_ideal,
                )
            )

        masks = list(images)
        for i, first in enumerate(masks):
            for second in masks[i + 1:]:
                if images[first] == images[second]:
                    lattice.injective = False
                    lattice.violations.append({"kind": "injective", "generators": [leads[first], leads[second]]})
                for small, large in ((first, second), (second, first)):
                    if bitsets.is_subset(small, large) and not bitsets.is_subset(images[large], images[small]):
                        lattice.inclusion_reversing = False
                        lattice.violations.append({"kind": "inclusion", "generators": [leads[small], leads[large]]})

        if not lattice.injective and not strict:
            logger.warning("Lattice map is not injective on this left-only extension")
        logger.info(f"Lattice map over {len(lattice.entries)} cyclic right submodules: passed={lattice.passed}")
        return lattice

    # Sigma presentation

    def construct_sigma(self, module: FiniteBimodule, x: int) -> SigmaConstruction:
        """
        Present M = Rx as R̄(sigma) with R̄ = R/ann_l^R(x).

        sigma(r̄) is the class of the least s with xr = sx; psi(s̄) = sx.

        Args:
            module: Bimodule M
            x: Left generator of M

        Returns:
            SigmaConstruction: With is_automorphism set when sigma is bijective and xR = Rx

        Raises:
            PreconditionError: If Rx != M, ann_l^R(x) is not an ideal, xR is not
                inside Rx, or sigma is not well defined
        """
        ring = module.ring
        Validators.require(Validators.validate_index(x, module.order, "Module element"), PreconditionError)
        oracle = module_oracle(module)
        if oracle.left_cyclic[x] != bitsets.full(module.order):
            raise PreconditionError(f"Module is not left-cyclic at {x}")

        ideal_mask = oracle.ring_left_annihilators[x]
        try:
            SubsetHandle.create(ring, ideal_mask, "ideal")
        except ValidationError as exc:
            raise PreconditionError(f"ann_l^R({x}) is not a two-sided ideal") from exc
        quotient = self.rings.quotient_by_ideal(ring, ideal_mask, bitsets.member_array(ideal_mask, ring.order), [])
        projection = quotient.projection

        left_times_x = module.left_action[:, x]
        x_times = module.right_action[x, :]
        matches = left_times_x[:, None] == x_times[None, :]
        if not matches.any(axis=0).all():
            r = int(np.argmin(matches.any(axis=0)))
            raise PreconditionError(f"x*{r} is not in Rx")
        least_s = np.argmax(matches, axis=0)
        phi = projection[least_s]

        sigma_image = np.full(quotient.quotient.order, -1, dtype=np.int64)
        for r in range(ring.order):
            q = projection[r]
            if sigma_image[q] == -1:
                sigma_image[q] = phi[r]
            elif sigma_image[q] != phi[r]:
                raise PreconditionError(f"sigma is not well defined on the class of {r}")
        try:
            sigma = self.rings.check_morphism(quotient.quotient, quotient.quotient, sigma_image, name="sigma")
        except MorphismError as exc:
            raise PreconditionError(f"Recovered sigma is not a ring endomorphism: {exc}") from exc

        psi = left_times_x[np.asarray(quotient.representatives, dtype=np.int64)]
        self._check_psi(module, quotient.quotient, projection, sigma.image, psi)

        right_cyclic = oracle.right_cyclic[x] == oracle.left_cyclic[x]
        construction = SigmaConstruction(
            module=module,
            generator=x,
            quotient=quotient,
            sigma=sigma,
            psi=psi,
            is_automorphism=sigma.is_automorphism and right_cyclic,
        )
        logger.debug(f"sigma at x={x}: quotient order {quotient.quotient.order}, automorphism={construction.is_automorphism}")
        return construction

    def _check_psi(
        self, module: FiniteBimodule, quotient: FiniteRing, projection: np.ndarray, sigma: np.ndarray, psi: np.ndarray
    ) -> None:
        """psi is an additive bijection with psi(ā s̄) = a psi(s̄) and psi(s̄ sigma(ā)) = psi(s̄) a."""
        if len(psi) != module.order or len(np.unique(psi)) != module.order:
            raise TheoremViolationError("psi is not a bijection onto M")
        if not np.array_equal(psi[quotient.add_table], module.add_table[np.ix_(psi, psi)]):
            raise TheoremViolationError("psi is not additive")
        if not np.array_equal(psi[quotient.mul_table[projection, :]], module.left_action[:, psi]):
            raise TheoremViolationError("psi is not left linear")
        if not np.array_equal(psi[quotient.mul_table[:, sigma[projection]]], module.right_action[psi, :]):
            raise TheoremViolationError("psi is not right linear")

    def sigma_summary(self, construction: SigmaConstruction) -> SigmaSummary:
        return SigmaSummary(
            generator=construction.generator,
            quotient_order=construction.quotient.quotient.order,
            sigma=construction.sigma.image.tolist(),
            psi=construction.psi.tolist(),
            is_automorphism=construction.is_automorphism,
            ideal=bitsets.members(construction.quotient.ideal_mask),
        )

    # Classification

    def commutation_failures(self, ring: FiniteRing, module: FiniteBimodule) -> List[dict]:
        """Central idempotents e with em != me for some m, each with its least m."""
        oracle = ring_oracle(ring)
        failures = []
        for e in np.flatnonzero(oracle.idempotents & oracle.central):
            bad = module.left_action[e, :] != module.right_action[:, e]
            if bad.any():
                failures.append({"e": int(e), "m": int(np.argmax(bad))})
        return failures

    def _twist_generator(self, module: FiniteBimodule) -> Optional[SigmaConstruction]:
        """First x with zero annihilator presenting M as R(sigma) for an automorphism sigma."""
        oracle = module_oracle(module)
        zero_ideal = 1 << module.ring.zero
        full = bitsets.full(module.order)
        for x in range(module.order):
            if oracle.ring_left_annihilators[x] != zero_ideal or oracle.left_cyclic[x] != full:
                continue
            try:
                construction = self.construct_sigma(module, x)
            except PreconditionError:
                continue
            if construction.is_automorphism:
                return construction
        return None

    def classify_perfect_case(self, ring: FiniteRing, module: FiniteBimodule) -> ClassificationVerdict:
        """
        Predict whether R∝M is morphic from its block decomposition.

        Central idempotents must commute with M. Each block eRe is then either
        simple artinian with eMe = 0 or eMe ≅ eRe(sigma) for an automorphism,
        or not simple with eMe = 0 and eRe Bézout on both sides.
        """
        failures = self.commutation_failures(ring, module)
        if failures:
            logger.info(f"Central idempotents do not commute with M: {failures}")
            return ClassificationVerdict(predicted_morphic=False, commutation_failures=failures)

        factors = []
        for factor in self.rings.primitive_central_idempotent_decomposition(ring):
            block = self.bimodules.corner_bimodule(module, factor)
            structure = self.rings.units_idempotents_radical(factor.ring)
            simple = structure.jacobson_radical == [factor.ring.zero] and len(structure.primitive_central_idempotents) == 1
            if simple and block.order == 1:
                verdict, reason = True, "simple artinian with M = 0"
            elif simple:
                construction = self._twist_generator(block)
                verdict = construction is not None
                reason = (
                    f"simple artinian with M = R(sigma) at x = {construction.generator}"
                    if verdict
                    else "simple artinian but M is not R(sigma) for an automorphism sigma"
                )
            else:
                bezout = all(self.bimodules.is_bezout(factor.ring, side).holds for side in ("left", "right"))
                verdict = bezout and block.order == 1
                if verdict:
                    reason = "not simple, principal, with M = 0"
                elif block.order != 1:
                    reason = "not simple and M != 0"
                else:
                    reason = "not simple and not Bezout on both sides"
            factors.append(
                FactorVerdict(
                    idempotent=factor.idempotent,
                    ring_order=factor.ring.order,
                    module_order=block.order,
                    simple=simple,
                    verdict=verdict,
                    reason=reason,
                )
            )
        return ClassificationVerdict(predicted_morphic=all(f.verdict for f in factors), factors=factors)

    def reconcile(self, ring: FiniteRing, module: FiniteBimodule) -> ReconcileReport:
        """Classification prediction against the brute-force two-sided scan of R∝M."""
        extension = self.extensions.build_trivial_extension(ring, module)
        classification = self.classify_perfect_case(ring, module)
        holds, counterexample, _ = self.morphic.scan_morphic(extension.as_ring, "two-sided")
        report = ReconcileReport(
            description=extension.as_ring.describe(),
            predicted_morphic=classification.predicted_morphic,
            brute_force_morphic=holds,
            classification=classification,
            counterexample=extension.render(counterexample) if counterexample is not None else None,
        )
        if not report.passed:
            logger.error(f"Classification disagrees with brute force on {report.description}")
        return report

    # Finite-length consequences

    def verify_cyclic_finite_length(self, extension: TrivialExtensionRing) -> PropertyReport:
        """
        For quasi-morphic S: M cyclic on both sides, R Bézout on both sides, M ≅ R̄(sigma).

        Raises:
            PreconditionError: If S is not quasi-morphic on both sides
        """
        S, ring, module = extension.as_ring, extension.base, extension.bimodule
        for side in ("left", "right"):
            if not self.morphic.scan_quasi_morphic(S, side)[0]:
                raise PreconditionError(f"Extension is not {side} quasi-morphic")

        oracle = module_oracle(module)
        full = bitsets.full(module.order)
        report = PropertyReport(name="cyclic_finite_length")
        left_generators = [m for m, mask in enumerate(oracle.left_cyclic) if mask == full]
        right_generators = [m for m, mask in enumerate(oracle.right_cyclic) if mask == full]
        report.check(bool(left_generators), identity="M left cyclic")
        report.check(bool(right_generators), identity="M right cyclic")
        for side in ("left", "right"):
            report.check(self.bimodules.is_bezout(ring, side).holds, identity=f"R {side} Bezout")

        if left_generators:
            x = left_generators[0]
            try:
                construction = self.construct_sigma(module, x)
                report.details["sigma"] = self.sigma_summary(construction).model_dump()
                report.check(construction.is_automorphism, identity="sigma automorphism", generator=x)
            except PreconditionError as exc:
                report.check(False, identity="M = R̄(sigma)", generator=x, error=str(exc))
        return report

    def verify_fundamental_corollary(self, extension: TrivialExtensionRing) -> PropertyReport:
        """
        Left morphic S gives, for every m, some a with ann_l^R(m) = Ra and ann_l^M(a) = Rm;
        morphic S gives the right-hand equalities as well.
        """
        S, ring, module = extension.as_ring, extension.base, extension.bimodule
        left = self.morphic.scan_morphic(S, "left")[0]
        right = self.morphic.scan_morphic(S, "right")[0]
        report = PropertyReport(name="fundamental_corollary", details={"left_morphic": left, "right_morphic": right})
        m_oracle, r_oracle = module_oracle(module), ring_oracle(ring)

        sides = [side for side, holds in (("left", left), ("right", left and right)) if holds]
        for side in sides:
            ring_ann = m_oracle.ring_left_annihilators if side == "left" else m_oracle.ring_right_annihilators
            module_ann = m_oracle.module_left_annihilators if side == "left" else m_oracle.module_right_annihilators
            for m in range(module.order):
                found = [
                    a
                    for a in r_oracle.generators(ring_ann[m], side)
                    if module_ann[a] == m_oracle.cyclic(m, side)
                ]
                report.check(bool(found), side=side, m=m)
        return report

    def verify_left_module_cyclic(self, extension: TrivialExtensionRing) -> PropertyReport:
        """Left morphic S makes M left Bézout and left cyclic."""
        module = extension.bimodule
        report = PropertyReport(name="left_module_cyclic")
        if not self.morphic.is_left_morphic_ring(extension.as_ring):
            report.details["skipped"] = "not left morphic"
            return report
        full = bitsets.full(module.order)
        report.check(self.bimodules.is_bezout(module, "left").holds, identity="M left Bezout")
        report.check(any(mask == full for mask in module_oracle(module).left_cyclic), identity="M left cyclic")
        return report

