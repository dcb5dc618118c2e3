"""
Trivial extensions R∝M materialized as finite rings.

An element (r, m) has index r * |M| + m, and (r, m)(s, n) = (rs, rn + ms).
R∝R(sigma) is the skew polynomial quotient R[t; sigma]/(t^2) with (r, m)
read as r + mt.
"""

from typing import Optional

import numpy as np
from loguru import logger

from morphic_analyser.config import Settings, get_settings
from morphic_analyser.models.algebra import (
    Construction,
    FiniteBimodule,
    FiniteRing,
    RingMorphism,
    SubsetHandle,
    TrivialExtensionRing,
)
from morphic_analyser.models.schemas import PropertyReport
from morphic_analyser.services.bimodule_service import BimoduleService
from morphic_analyser.services.ring_service import RingService, ring_oracle
from morphic_analyser.utils import bitsets
from morphic_analyser.utils.validators import (
    BimoduleError,
    CapExceededError,
    MorphismError,
    PreconditionError,
    TheoremViolationError,
    ValidationError,
    Validators,
)


class ExtensionService:
    """Service building trivial extensions and checking their pair structure."""

    def __init__(self, settings: Optional[Settings] = None):
        """
        Initialize the extension service.

        Args:
            settings: Run configuration (if None, loads from environment)
        """
        self.settings = settings or get_settings()
        self.rings = RingService(self.settings)
        self.bimodules = BimoduleService(self.settings)

    def build_trivial_extension(self, ring: FiniteRing, module: FiniteBimodule) -> TrivialExtensionRing:
        """
        Build R∝M.

        Args:
            ring: Base ring R
            module: Bimodule M over R

        Returns:
            TrivialExtensionRing: With as_ring of order |R| * |M|

        Raises:
            BimoduleError: If M is not a bimodule over R
            CapExceededError: If |R| * |M| exceeds the order cap
        """
        if module.ring is not ring:
            raise BimoduleError("Bimodule is defined over a different ring")
        n = module.order
        order = ring.order * n
        Validators.require(Validators.validate_order(order, self.settings.order_cap), CapExceededError)

        idx = np.arange(order, dtype=np.int64)
        r, m = idx // n, idx % n
        rows_r, cols_r = r[:, None], r[None, :]
        rows_m, cols_m = m[:, None], m[None, :]
        add = ring.add_table[rows_r, cols_r].astype(np.int64) * n + module.add_table[rows_m, cols_m]
        # (r, m)(s, k) = (rs, rk + ms)
        module_part = module.add_table[module.left_action[rows_r, cols_m], module.right_action[rows_m, cols_r]]
        mul = ring.mul_table[rows_r, cols_r].astype(np.int64) * n + module_part

        as_ring = FiniteRing(
            order=order,
            add_table=add,
            mul_table=mul,
            zero=ring.zero * n + module.zero,
            one=ring.one * n + module.zero,
            construction=Construction(kind="trivial-extension", children=(ring.construction, module.construction)),
        )
        logger.info(f"Built trivial extension of order {order} ({ring.order} x {n})")
        return TrivialExtensionRing(base=ring, bimodule=module, as_ring=as_ring)

    def skew_poly_quotient(self, ring: FiniteRing, sigma: RingMorphism) -> TrivialExtensionRing:
        """R[t; sigma]/(t^2) as R∝R(sigma); the pair (r, m) stands for r + mt."""
        return self.build_trivial_extension(ring, self.bimodules.twisted_bimodule(ring, sigma))

    def corner_ring(self, extension: TrivialExtensionRing, e: int, e_prime: int) -> SubsetHandle:
        """
        The corner (e,0) S (e',0), checked against eRe' ∝ eMe'.

        Raises:
            PreconditionError: If e or e' is not idempotent
            TheoremViolationError: If the two sets differ
        """
        ring, module, S = extension.base, extension.bimodule, extension.as_ring
        for x in (e, e_prime):
            Validators.require(Validators.validate_index(x, ring.order), PreconditionError)
            if ring.mul(x, x) != x:
                raise PreconditionError(f"Element {x} is not idempotent")

        E, E_prime = extension.encode(e, module.zero), extension.encode(e_prime, module.zero)
        corner = bitsets.from_index_array(S.mul_table[S.mul_table[E, :], E_prime], S.order)

        ring_part = np.unique(ring.mul_table[ring.mul_table[e, :], e_prime])
        module_part = np.unique(module.left_action[e][module.right_action[:, e_prime]])
        pairs = (ring_part[:, None] * module.order + module_part[None, :]).ravel()
        expected = bitsets.from_index_array(pairs, S.order)

        if corner != expected:
            logger.error(f"Corner ({e},0)S({e_prime},0) differs from eRe' x eMe'")
            raise TheoremViolationError(f"Corner ring mismatch at idempotents ({e}, {e_prime})")
        return SubsetHandle.create(S, corner, "subset")

    def verify_idempotent_corner_ring(self, extension: TrivialExtensionRing) -> PropertyReport:
        """Corner identity over every pair of idempotents of the base."""
        report = PropertyReport(name="idempotent_corner_ring")
        idempotents = np.flatnonzero(ring_oracle(extension.base).idempotents).tolist()
        for e in idempotents:
            for f in idempotents:
                try:
                    self.corner_ring(extension, e, f)
                    report.checked += 1
                except TheoremViolationError as exc:
                    report.checked += 1
                    report.fail(e=e, e_prime=f, error=str(exc))
        return report

    def verify_radical_extension(self, extension: TrivialExtensionRing) -> PropertyReport:
        """
        J(R∝M) = J(R)∝M, 0∝M is a square-zero ideal, and S/(0∝M) ≅ R via (r, m) -> r.
        """
        ring, module, S = extension.base, extension.bimodule, extension.as_ring
        n = module.order
        report = PropertyReport(name="radical_extension")

        radical_S = bitsets.from_bool_array(ring_oracle(S).radical)
        radical_R = np.flatnonzero(ring_oracle(ring).radical)
        expected = bitsets.from_index_array((radical_R[:, None] * n + np.arange(n)[None, :]).ravel(), S.order)
        report.check(radical_S == expected, identity="J(S) = J(R) x M")

        ideal = np.asarray(extension.module_ideal)
        products = S.mul_table[np.ix_(ideal, ideal)]
        report.check(bool((products == S.zero).all()), identity="(0,m)(0,n) = 0")
        try:
            SubsetHandle.create(S, bitsets.from_index_array(ideal, S.order), "ideal")
            report.check(True)
        except ValidationError as exc:
            report.check(False, identity="0 x M is an ideal", error=str(exc))

        try:
            projection = self.rings.check_morphism(S, ring, np.arange(S.order) // n, name="projection")
            report.check(len(np.unique(projection.image)) == ring.order, identity="projection onto R")
        except MorphismError as exc:
            report.check(False, identity="projection is a ring homomorphism", error=str(exc))

        quotient = self.rings.quotient_by_ideal(S, bitsets.from_index_array(ideal, S.order), ideal, [])
        section = quotient.projection[np.arange(ring.order) * n + module.zero]
        try:
            induced = self.rings.check_morphism(ring, quotient.quotient, section, name="section")
            report.check(induced.is_automorphism, identity="S/(0 x M) isomorphic to R")
        except MorphismError as exc:
            report.check(False, identity="S/(0 x M) isomorphic to R", error=str(exc))
        return report
