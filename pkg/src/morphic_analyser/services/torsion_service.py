"""
Quotient-torsion service: Q/R over Z and F_p[x], the trivial extension
R∝Q/R, closed-form annihilators and their certification.

In R∝Q/R every annihilator and every principal ideal has the product shape
{(b, y) : g | b, den(y) | bound}, so equalities of such sets reduce to
comparing two AnnihilatorDescriptors. Sampling is a second, independent
check of the same equalities.
"""

import re
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
from loguru import logger

from morphic_analyser.config import Settings, get_settings
from morphic_analyser.models.algebra import FiniteRing
from morphic_analyser.models.schemas import PartnerReport, PropertyReport
from morphic_analyser.models.torsion import (
    AnnihilatorDescriptor,
    EuclideanDomain,
    EuclideanElement,
    FractionModOne,
    IntegerDomain,
    PolynomialDomain,
    QTrivExtElement,
)
from morphic_analyser.services.bimodule_service import BimoduleService
from morphic_analyser.services.morphic_service import MorphicService
from morphic_analyser.services.ring_service import ring_oracle
from morphic_analyser.utils import bitsets
from morphic_analyser.utils.spec_parser import SpecParseError, parse_poly
from morphic_analyser.utils.validators import PreconditionError, TheoremViolationError, Validators

_GALOIS = re.compile(r"^\s*(?:GF|F)\(?(\d+)\)?\s*(?:\[x\])?\s*$")


@lru_cache(maxsize=32)
def _integer_domain() -> IntegerDomain:
    return IntegerDomain()


@lru_cache(maxsize=32)
def _polynomial_domain(p: int) -> PolynomialDomain:
    return PolynomialDomain(p)


class TorsionService:
    """Service for exact arithmetic and morphic witnesses in R∝Q/R."""

    def __init__(self, settings: Optional[Settings] = None):
        """
        Initialize the torsion service.

        Args:
            settings: Run configuration (if None, loads from environment)
        """
        self.settings = settings or get_settings()

    # Domains and parsing

    def domain(self, name: str = "Z") -> EuclideanDomain:
        """
        Resolve a base domain name: "Z" (or "ZZ") or "GF(p)" / "GF(p)[x]".

        Raises:
            PreconditionError: If the name is unknown or p is not prime
        """
        if name.strip() in ("Z", "ZZ"):
            return _integer_domain()
        match = _GALOIS.match(name)
        if not match:
            raise PreconditionError(f"Unknown base domain '{name}' (expected Z or GF(p))")
        p = int(match.group(1))
        Validators.require(Validators.validate_prime(p), PreconditionError)
        return _polynomial_domain(p)

    def element(self, domain: EuclideanDomain, text: str) -> EuclideanElement:
        """Parse a domain element: a decimal integer, or a polynomial in x."""
        text = text.strip()
        if isinstance(domain, IntegerDomain):
            try:
                return domain.element(int(text))
            except ValueError as e:
                raise PreconditionError(f"Not an integer: '{text}'") from e
        try:
            return domain.element(parse_poly(text, domain.p))
        except SpecParseError as e:
            raise PreconditionError(f"Not a polynomial over GF({domain.p}): '{text}'") from e

    def fraction(self, domain: EuclideanDomain, text: str) -> FractionModOne:
        """Parse "p/q" (parentheses allowed around polynomials); a bare p means p/1 = 0."""
        if "/" not in text:
            return FractionModOne.reduce(self.element(domain, text), domain.one)
        numerator, denominator = text.split("/", 1)
        return self.reduce_fraction(
            self.element(domain, numerator.strip().strip("()")),
            self.element(domain, denominator.strip().strip("()")),
        )

    def qtriv_element(self, domain: EuclideanDomain, text: str) -> QTrivExtElement:
        """Parse "r,p/q" into (r, p/q)."""
        if "," not in text:
            raise PreconditionError(f"Expected 'r,p/q', got '{text}'")
        r, m = text.split(",", 1)
        return QTrivExtElement(self.element(domain, r), self.fraction(domain, m))

    # Arithmetic

    def reduce_fraction(self, p: EuclideanElement, q: EuclideanElement) -> FractionModOne:
        return FractionModOne.reduce(p, q)

    def add(self, x: FractionModOne, y: FractionModOne) -> FractionModOne:
        return x + y

    def scalar_mul(self, r: EuclideanElement, x: FractionModOne) -> FractionModOne:
        return x.scale(r)

    def annihilator_generator_in_R(self, x: FractionModOne) -> EuclideanElement:
        """ann^R(p/q) = Rq: r·x = 0 iff q | r."""
        return x.q

    def annihilator_generator_in_QmodR(self, a: EuclideanElement) -> FractionModOne:
        """
        ann^{Q/R}(a) = R(1/a): y·a = 0 iff den(y) | a.

        Raises:
            PreconditionError: If a is zero (the annihilator is all of Q/R)
        """
        if a.is_zero():
            raise PreconditionError("ann(0) is all of Q/R and not cyclic")
        return FractionModOne.reduce(a.domain.one, a)

    def divide(self, m: FractionModOne, d: EuclideanElement) -> FractionModOne:
        """
        The canonical z with d·z = m, namely p/(qd); other solutions differ by ann(d).

        Raises:
            PreconditionError: If d is zero
        """
        if d.is_zero():
            raise PreconditionError("Cannot divide by zero")
        return FractionModOne.reduce(m.p, m.q * d)

    def generates_reciprocal(self, y: FractionModOne) -> bool:
        """
        True when a = den(y) has ann(y) = Ra and R·y = R·(1/a) = ann^{Q/R}(a).

        With s·p + t·q = 1 from the extended gcd, s·y = 1/q; and p·(1/q) = y.
        """
        domain = y.domain
        a = self.annihilator_generator_in_R(y)
        if a.is_zero() or not y.scale(a).is_zero():
            return False
        s, _, g = domain.gcdex(y.p.value, y.q.value)
        reciprocal = self.annihilator_generator_in_QmodR(a)
        return (
            domain.element(g) == domain.one
            and y.scale(domain.element(s)) == reciprocal
            and reciprocal.scale(y.p) == y
        )

    def morphic_partner(self, e: QTrivExtElement) -> QTrivExtElement:
        """w with ann(e) = Sw and ann(w) = Se in S = R∝Q/R."""
        domain = e.domain
        if not e.r.is_zero():
            return QTrivExtElement(domain.zero, FractionModOne.reduce(domain.one, e.r))
        if not e.m.is_zero():
            return QTrivExtElement.lift(e.m.q)
        return QTrivExtElement.one(domain)

    # Closed forms

    def annihilator_descriptor(self, e: QTrivExtElement) -> AnnihilatorDescriptor:
        """ann(a, x): {(0, y) : den(y) | a} for a != 0, else {(b, y) : den(x) | b}."""
        if not e.r.is_zero():
            return AnnihilatorDescriptor(e.domain.zero, e.r.normalized())
        return AnnihilatorDescriptor(e.m.q, None)

    def principal_descriptor(self, e: QTrivExtElement) -> AnnihilatorDescriptor:
        """S(c, z): {(b, y) : c | b} for c != 0, else {(0, y) : den(y) | den(z)}."""
        if not e.r.is_zero():
            return AnnihilatorDescriptor(e.r.normalized(), None)
        return AnnihilatorDescriptor(e.domain.zero, e.m.q)

    # Sampling helpers

    def sample_bound(self, domain: EuclideanDomain) -> int:
        if isinstance(domain, IntegerDomain):
            return self.settings.denominator_bound
        return self.settings.degree_bound

    def random_nonzero(self, domain: EuclideanDomain, rng: np.random.Generator, bound: int) -> EuclideanElement:
        while True:
            r = domain.random_element(rng, bound)
            if not r.is_zero():
                return r

    def random_fraction(self, domain: EuclideanDomain, rng: np.random.Generator, bound: int) -> FractionModOne:
        q = self.random_nonzero(domain, rng, bound)
        return FractionModOne.reduce(domain.random_element(rng, bound), q)

    def random_element(self, domain: EuclideanDomain, rng: np.random.Generator, bound: int) -> QTrivExtElement:
        return QTrivExtElement(domain.random_element(rng, bound), self.random_fraction(domain, rng, bound))

    def fractions(self, domain: EuclideanDomain, bound: int) -> Iterator[FractionModOne]:
        """Every nonzero canonical p/q with q up to bound (|q| <= bound, or deg q <= bound)."""
        for value in domain.nonzero_elements(bound):
            q = domain.element(value)
            if q.is_unit():
                continue
            for residue in domain.residues(q.value):
                p = domain.element(residue)
                if not p.is_zero() and p.gcd(q).is_unit():
                    yield FractionModOne(p, q)

    def _probes(
        self, domain: EuclideanDomain, descriptors: List[AnnihilatorDescriptor], rng: np.random.Generator, bound: int, count: int
    ) -> Iterator[QTrivExtElement]:
        """Descriptor generators first, then elements of the descriptor shapes, then uniform samples."""
        for descriptor in descriptors:
            yield from descriptor.witnesses()
        for i in range(count):
            descriptor = descriptors[i % len(descriptors)]
            if i % 3 == 2:
                yield self.random_element(domain, rng, bound)
                continue
            r = descriptor.ring_generator * domain.random_element(rng, bound)
            if descriptor.module_bound is None:
                y = self.random_fraction(domain, rng, bound)
            else:
                y = FractionModOne.reduce(domain.random_element(rng, bound), descriptor.module_bound)
            yield QTrivExtElement(r, y)

    def verify_partner(
        self,
        e: QTrivExtElement,
        w: QTrivExtElement,
        sample_bound: Optional[int] = None,
        seed: Optional[int] = None,
        samples: int = 200,
    ) -> PartnerReport:
        """
        Certify ann(e) = Sw and ann(w) = Se, by closed forms and by seeded sampling.

        Sampled membership in an annihilator is computed by multiplying out;
        membership in a principal ideal is read from its closed form.
        """
        domain = e.domain
        bound = sample_bound or self.sample_bound(domain)
        rng = np.random.default_rng(self.settings.seed if seed is None else seed)

        pairs = (
            ("ann(e)=Sw", e, w),
            ("ann(w)=Se", w, e),
        )
        closed_form = all(
            self.annihilator_descriptor(a) == self.principal_descriptor(b) for _, a, b in pairs
        )

        witness: Optional[Dict] = None
        checked = 0
        for name, a, b in pairs:
            principal = self.principal_descriptor(b)
            probes = self._probes(domain, [self.annihilator_descriptor(a), principal], rng, bound, samples)
            for s in probes:
                checked += 1
                in_annihilator = (s * a).is_zero()
                in_principal = principal.contains(s)
                if in_annihilator != in_principal:
                    witness = {
                        "equality": name,
                        "element": s.to_json(),
                        "in_annihilator": in_annihilator,
                        "in_principal": in_principal,
                    }
                    break
            if witness is not None:
                break

        report = PartnerReport(
            element=e.to_json(),
            partner=w.to_json(),
            closed_form=closed_form,
            sampled=witness is None,
            samples=checked,
            witness=witness,
        )
        if not report.passed:
            logger.warning(f"Partner check failed for e={e}, w={w}: {witness}")
        return report

    def certify_partner(self, e: QTrivExtElement) -> QTrivExtElement:
        """
        Partner of e, certified.

        Raises:
            TheoremViolationError: If the closed-form partner fails certification
        """
        w = self.morphic_partner(e)
        report = self.verify_partner(e, w)
        if not report.passed:
            logger.error(f"Morphic partner of {e} failed certification")
            raise TheoremViolationError(f"Partner {w} of {e} is not certified: {report.witness}")
        return w

    def verify_partners(self, domain: EuclideanDomain, count: int, bound: int, seed: Optional[int] = None) -> PropertyReport:
        """morphic_partner + verify_partner on seeded random elements, plus the wrong-partner control."""
        rng = np.random.default_rng(self.settings.seed if seed is None else seed)
        report = PropertyReport(name="qtriv_partners", sampled=True)
        for _ in range(count):
            e = self.random_element(domain, rng, bound)
            w = self.morphic_partner(e)
            outcome = self.verify_partner(e, w, sample_bound=bound, seed=int(rng.integers(2**31)), samples=6)
            report.check(outcome.passed, element=e.to_json(), partner=w.to_json(), witness=outcome.witness)

        two, three = domain.element(2), domain.element(3)
        if isinstance(domain, IntegerDomain):
            control = self.verify_partner(
                QTrivExtElement(domain.zero, FractionModOne.reduce(domain.one, two)), QTrivExtElement.lift(three)
            )
            report.check(not control.passed, control="wrong partner accepted")
            report.details["negative_control"] = control.model_dump(mode="json")
        logger.info(f"Partner checks over {domain.tag}: {report.checked} checks, passed={report.passed}")
        return report

    # Theorem-level checks

    def lattice_bijection_sample(self, domain: EuclideanDomain, bound: int) -> PropertyReport:
        """
        R(1/q) -> qR over all normalized nonzero q up to bound: a bijection onto the
        ideals qR that reverses inclusion.
        """
        Validators.require(Validators.validate_bound(bound), PreconditionError)
        report = PropertyReport(name="lattice_bijection")
        entries: List[Tuple[EuclideanElement, FractionModOne]] = []
        ideals = set()
        for value in domain.nonzero_elements(bound):
            q = domain.element(value)
            generator = FractionModOne.reduce(domain.one, q)
            image = self.annihilator_generator_in_R(generator)
            report.check(image == q, q=q.to_json(), image=image.to_json())
            report.check(image not in ideals, q=q.to_json(), duplicate=True)
            ideals.add(image)
            entries.append((q, generator))

        for q, generator in entries:
            for q_other, generator_other in entries:
                submodule_inside = generator.scale(q_other).is_zero()  # 1/q in R(1/q')
                ideal_contains = q.divides(q_other)                   # q'R inside qR
                report.check(
                    submodule_inside == ideal_contains,
                    q=q.to_json(),
                    q_other=q_other.to_json(),
                    submodule_inside=submodule_inside,
                    ideal_contains=ideal_contains,
                )
        report.details["submodules"] = len(entries)
        return report

    def verify_annihilator_contracts(self, domain: EuclideanDomain, bound: int, seed: Optional[int] = None) -> PropertyReport:
        """
        Both annihilator contracts on every canonical fraction up to bound:
        r·x = 0 iff den(x) | r, and x·a = 0 iff den(x) | a.
        """
        rng = np.random.default_rng(self.settings.seed if seed is None else seed)
        report = PropertyReport(name="annihilator_contracts")
        for x in self.fractions(domain, bound):
            g = self.annihilator_generator_in_R(x)
            k = self.random_nonzero(domain, rng, 8)
            report.check(x.scale(g).is_zero(), x=x.to_json(), r=g.to_json())
            report.check(x.scale(g * k).is_zero(), x=x.to_json(), r=(g * k).to_json())
            offset = divmod(self.random_nonzero(domain, rng, bound), g)[1]
            if not offset.is_zero():
                r = g * k + offset
                report.check(not x.scale(r).is_zero(), x=x.to_json(), r=r.to_json())

            a = self.random_nonzero(domain, rng, bound)
            report.check(
                x.scale(a).is_zero() == x.q.divides(a),
                x=x.to_json(),
                a=a.to_json(),
            )
            y = self.annihilator_generator_in_QmodR(g)
            report.check(y.scale(g).is_zero() and y.q == g, a=g.to_json(), y=y.to_json())
        logger.info(f"Annihilator contracts over {domain.tag} up to {bound}: {report.checked} checks")
        return report

    def verify_domain_conditions(self, domain: EuclideanDomain, bound: int, seed: Optional[int] = None) -> PropertyReport:
        """
        Conditions making R∝Q/R morphic over a domain, for every nonzero a up to bound:
        Q/R is divisible; m = 1/a has ann(m) = Ra and ann^{Q/R}(a) = Rm; every m has
        such an a; and 0 -> Ra -> Rm -> (Q/R)a -> Q/R -> 0 is exact on bounded
        denominators.
        """
        rng = np.random.default_rng(self.settings.seed if seed is None else seed)
        report = PropertyReport(name="domain_conditions")
        denominators = [domain.element(v) for v in domain.nonzero_elements(bound)]
        for value in domain.nonzero_elements(bound):
            a = domain.element(value)
            m = self.annihilator_generator_in_QmodR(a)
            report.check(self.annihilator_generator_in_R(m) == a, condition="ann(m)=Ra", a=a.to_json())
            image = {m.scale(domain.element(r)) for r in domain.residues(a.value)}
            report.check(all(y.scale(a).is_zero() for y in image), condition="image inside kernel", a=a.to_json())
            report.check(
                not (self.random_nonzero(domain, rng, bound) * a).is_zero(),
                condition="multiplication by a injective",
                a=a.to_json(),
            )
            for q in denominators:
                y = FractionModOne.reduce(domain.random_element(rng, bound), q)
                in_kernel = y.scale(a).is_zero()
                report.check(in_kernel == (y in image), condition="kernel = image", a=a.to_json(), y=y.to_json())
                z = self.divide(y, a)
                report.check(z.scale(a) == y, condition="divisible", a=a.to_json(), y=y.to_json())
                if not y.is_zero():
                    report.check(self.generates_reciprocal(y), condition="partner for m", y=y.to_json())
        logger.info(f"Domain conditions over {domain.tag} up to {bound}: {report.checked} checks, passed={report.passed}")
        return report

    def verify_no_faithful_element(self, domain: EuclideanDomain, bound: int, seed: Optional[int] = None) -> PropertyReport:
        """No x in Q/R has zero annihilator: den(x) is a nonzero element killing x."""
        rng = np.random.default_rng(self.settings.seed if seed is None else seed)
        report = PropertyReport(name="no_faithful_element", sampled=True)
        for value in domain.nonzero_elements(bound):
            x = FractionModOne.reduce(domain.random_element(rng, bound), domain.element(value))
            g = self.annihilator_generator_in_R(x)
            report.check(not g.is_zero() and x.scale(g).is_zero(), x=x.to_json())
        return report

    def weak_baer_bezout_witness(self, ring: FiniteRing) -> PropertyReport:
        """
        Reduced / Bézout / weak-Baer flags of a finite commutative ring, with an
        idempotent generator for each annihilator where one exists.

        Checked: reduced Bézout with principal annihilators gives weak Baer, and
        for reduced rings morphic holds exactly when Bézout and weak Baer do.

        Raises:
            PreconditionError: If the ring is not commutative
        """
        if not ring.is_commutative:
            raise PreconditionError("Weak-Baer witnesses need a commutative ring")
        oracle = ring_oracle(ring)
        idempotents = set(np.flatnonzero(oracle.idempotents).tolist())
        report = PropertyReport(name="weak_baer_bezout")

        generators: Dict[str, int] = {}
        principal_annihilators = True
        weak_baer = True
        counterexample = None
        for a in range(ring.order):
            annihilator = oracle.left_annihilator(a)
            candidates = oracle.generators(annihilator, "left")
            principal_annihilators &= bool(candidates)
            idempotent = next((e for e in candidates if e in idempotents), None)
            if idempotent is None:
                if weak_baer:
                    counterexample = {"element": a, "annihilator": bitsets.members(annihilator)}
                weak_baer = False
            else:
                generators[str(a)] = idempotent

        square_zero = np.diagonal(ring.mul_table) == ring.zero
        square_zero[ring.zero] = False
        reduced = not square_zero.any()
        bezout = BimoduleService(self.settings).is_bezout(ring, "left").holds
        morphic = MorphicService(self.settings).scan_morphic(ring, "left")[0]

        if reduced and bezout and principal_annihilators:
            report.check(weak_baer, claim="reduced Bezout with principal annihilators is weak Baer", counterexample=counterexample)
        if reduced:
            report.check(morphic == (bezout and weak_baer), claim="morphic iff Bezout weak Baer", morphic=morphic)
        report.details.update(
            reduced=reduced,
            bezout=bezout,
            weak_baer=weak_baer,
            morphic=morphic,
            principal_annihilators=principal_annihilators,
            idempotent_generators=generators,
            counterexample=counterexample,
        )
        return report
