"""
Finite ring construction and interrogation.

Rings are dense operation tables over indices 0..order-1. Constructors keep
a fixed codec (cyclic: k at k; galois: sum c_i p^i; matrix: row-major mixed
radix with the first entry most significant; product: l*|right| + r).
"""

from functools import cached_property, lru_cache
from itertools import product as cartesian
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_degree, gf_from_int_poly, gf_monic, gf_rem, gf_strip

from morphic_analyser.config import Settings, get_settings
from morphic_analyser.models.algebra import (
    Construction,
    CornerFactor,
    FiniteRing,
    QuotientMap,
    RingMorphism,
)
from morphic_analyser.models.schemas import AxiomReport, RingStructure
from morphic_analyser.utils import bitsets
from morphic_analyser.utils.validators import (
    CapExceededError,
    MorphismError,
    PreconditionError,
    RingConstructionError,
    Validators,
)


# Above this order the oracle computes per-element masks on demand
DENSE_LIMIT = 4096


class RingOracle:
    """Memoized principal ideals, annihilators, units and radical of one ring."""

    def __init__(self, ring: FiniteRing):
        self.ring = ring
        self.dense = ring.order <= DENSE_LIMIT
        self._single: Dict[Tuple[str, int], int] = {}

    # Principal one-sided ideals and annihilators, as bitsets

    @cached_property
    def _left_principal(self) -> List[int]:
        n = self.ring.order
        flags = np.zeros((n, n), dtype=bool)
        flags[np.arange(n)[:, None], self.ring.mul_table.T] = True
        return bitsets.rows_to_masks(flags)

    @cached_property
    def _right_principal(self) -> List[int]:
        n = self.ring.order
        flags = np.zeros((n, n), dtype=bool)
        flags[np.arange(n)[:, None], self.ring.mul_table] = True
        return bitsets.rows_to_masks(flags)

    @cached_property
    def _left_annihilators(self) -> List[int]:
        return bitsets.rows_to_masks(self.ring.mul_table.T == self.ring.zero)

    @cached_property
    def _right_annihilators(self) -> List[int]:
        return bitsets.rows_to_masks(self.ring.mul_table == self.ring.zero)

    def _lookup(self, kind: str, x: int) -> int:
        if self.dense:
            return getattr(self, f"_{kind}")[x]
        key = (kind, x)
        if key not in self._single:
            mul, n = self.ring.mul_table, self.ring.order
            if kind == "left_principal":
                mask = bitsets.from_index_array(mul[:, x], n)
            elif kind == "right_principal":
                mask = bitsets.from_index_array(mul[x, :], n)
            elif kind == "left_annihilators":
                mask = bitsets.from_bool_array(mul[:, x] == self.ring.zero)
            else:
                mask = bitsets.from_bool_array(mul[x, :] == self.ring.zero)
            self._single[key] = mask
        return self._single[key]

    def left_principal(self, x: int) -> int:
        """Rx."""
        return self._lookup("left_principal", x)

    def right_principal(self, x: int) -> int:
        """xR."""
        return self._lookup("right_principal", x)

    def left_annihilator(self, a: int) -> int:
        """ann_l(a) = {r : ra = 0}."""
        return self._lookup("left_annihilators", a)

    def right_annihilator(self, a: int) -> int:
        """ann_r(a) = {r : ar = 0}."""
        return self._lookup("right_annihilators", a)

    def principal(self, x: int, side: str) -> int:
        return self.left_principal(x) if side == "left" else self.right_principal(x)

    def annihilator(self, a: int, side: str) -> int:
        return self.left_annihilator(a) if side == "left" else self.right_annihilator(a)

    @cached_property
    def _generator_index(self) -> Dict[str, Dict[int, List[int]]]:
        index: Dict[str, Dict[int, List[int]]] = {"left": {}, "right": {}}
        for side, masks in (("left", self._left_principal), ("right", self._right_principal)):
            for x, mask in enumerate(masks):
                index[side].setdefault(mask, []).append(x)
        return index

    def generators(self, mask: int, side: str) -> List[int]:
        """All g (ascending) with Rg = mask (left) or gR = mask (right)."""
        if self.dense:
            return self._generator_index[side].get(mask, [])
        return [g for g in bitsets.members(mask) if self.principal(g, side) == mask]

    def principal_masks(self, side: str) -> Dict[int, int]:
        """Distinct principal one-sided ideals mapped to their least generator."""
        if self.dense:
            return {mask: gens[0] for mask, gens in self._generator_index[side].items()}
        out: Dict[int, int] = {}
        for x in range(self.ring.order):
            out.setdefault(self.principal(x, side), x)
        return out

    # Units, idempotents, radical

    @cached_property
    def unit_inverse(self) -> np.ndarray:
        """Two-sided inverse of each unit, -1 elsewhere."""
        hits = self.ring.mul_table == self.ring.one
        both = hits & hits.T
        inverse = np.where(both.any(axis=1), np.argmax(both, axis=1), -1)
        return inverse.astype(np.int64)

    @cached_property
    def units(self) -> np.ndarray:
        return self.unit_inverse >= 0

    @cached_property
    def idempotents(self) -> np.ndarray:
        n = self.ring.order
        return np.diagonal(self.ring.mul_table) == np.arange(n)

    @cached_property
    def central(self) -> np.ndarray:
        mul = self.ring.mul_table
        return np.all(mul == mul.T, axis=1)

    @cached_property
    def radical(self) -> np.ndarray:
        """x with 1 - rx a unit for every r."""
        ring = self.ring
        one_minus = ring.add_table[ring.one][ring.neg_table[ring.mul_table]]
        return self.units[one_minus].all(axis=0)


@lru_cache(maxsize=256)
def ring_oracle(ring: FiniteRing) -> RingOracle:
    """Shared oracle for a ring (rings hash by identity)."""
    return RingOracle(ring)


def _mixed_radix_digits(count: int, radix: int, width: int) -> np.ndarray:
    """digits[x, t], most significant first."""
    weights = radix ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return (np.arange(count, dtype=np.int64)[:, None] // weights[None, :]) % radix


class RingService:
    """Service constructing finite rings and computing their basic structure."""

    def __init__(self, settings: Optional[Settings] = None):
        """
        Initialize the ring service.

        Args:
            settings: Run configuration (if None, loads from environment)
        """
        self.settings = settings or get_settings()

    def _require_order(self, order: int, what: str = "Ring") -> None:
        if order < 1:
            raise RingConstructionError(f"{what} order must be positive (got {order})")
        Validators.require(Validators.validate_order(order, self.settings.order_cap, what), CapExceededError)

    # Constructors

    def build_cyclic(self, n: int) -> FiniteRing:
        """
        Build the integers modulo n with element k at index k.

        Args:
            n: Modulus (1 gives the zero ring)

        Returns:
            FiniteRing: Z/nZ

        Raises:
            CapExceededError: If n exceeds the order cap
        """
        self._require_order(n)
        k = np.arange(n, dtype=np.int64)
        ring = FiniteRing(
            order=n,
            add_table=np.add.outer(k, k) % n,
            mul_table=np.multiply.outer(k, k) % n,
            zero=0,
            one=1 % n,
            construction=Construction(kind="cyclic", params={"n": n}),
        )
        logger.debug(f"Built Z({n})")
        return ring

    def is_irreducible(self, p: int, modulus: Sequence[int]) -> bool:
        """Trial division by every monic polynomial of degree up to half the degree."""
        f = gf_strip([ZZ(c % p) for c in modulus])
        degree = gf_degree(f)
        for d in range(1, degree // 2 + 1):
            for tail in cartesian(range(p), repeat=d):
                divisor = [ZZ(1)] + [ZZ(c) for c in tail]
                if not gf_rem(f, divisor, p, ZZ):
                    return False
        return True

    def build_galois(self, p: int, modulus: Sequence[int]) -> FiniteRing:
        """
        Build the field F_p[x]/(modulus).

        Args:
            p: Prime characteristic
            modulus: Coefficients, highest degree first

        Returns:
            FiniteRing: Field with p^deg elements; index = sum c_i p^i

        Raises:
            RingConstructionError: If p is not prime or the modulus is reducible
        """
        Validators.require(Validators.validate_prime(p), RingConstructionError)
        f = gf_strip(gf_from_int_poly([int(c) for c in modulus], p))
        degree = gf_degree(f)
        if degree < 1:
            raise RingConstructionError("Modulus must have degree at least 1")
        _, f = gf_monic(f, p, ZZ)
        if not self.is_irreducible(p, f):
            logger.error(f"Modulus {[int(c) for c in f]} is reducible over F_{p}")
            raise RingConstructionError(f"Modulus {[int(c) for c in f]} is reducible over F_{p}")

        q = p ** degree
        self._require_order(q, "Field")

        # digits[x, i] = coefficient of x^i
        powers = p ** np.arange(degree, dtype=np.int64)
        digits = (np.arange(q, dtype=np.int64)[:, None] // powers[None, :]) % p

        # reduction[k] = coefficients of x^k mod f, ascending
        reduction = np.zeros((2 * degree - 1, degree), dtype=np.int64)
        for k in range(2 * degree - 1):
            rem = gf_rem([ZZ(1)] + [ZZ(0)] * k, f, p, ZZ)
            coeffs = [int(c) for c in reversed(rem)]
            reduction[k, : len(coeffs)] = coeffs

        conv = np.zeros((q, q, 2 * degree - 1), dtype=np.int64)
        for i in range(degree):
            for j in range(degree):
                conv[:, :, i + j] += np.multiply.outer(digits[:, i], digits[:, j])
        products = np.tensordot(conv, reduction, axes=([2], [0])) % p
        sums = (digits[:, None, :] + digits[None, :, :]) % p

        ring = FiniteRing(
            order=q,
            add_table=sums @ powers,
            mul_table=products @ powers,
            zero=0,
            one=1,
            construction=Construction(kind="galois", params={"p": p, "modulus": [int(c) for c in f]}),
        )
        logger.debug(f"Built GF({p}^{degree})")
        return ring

    def build_matrix_ring(self, k: int, base: FiniteRing) -> FiniteRing:
        """
        Build the ring of k x k matrices over base.

        Args:
            k: Matrix size
            base: Coefficient ring

        Returns:
            FiniteRing: Row-major mixed-radix indexed matrix ring

        Raises:
            CapExceededError: If base.order^(k^2) exceeds the order cap
        """
        if k < 1:
            raise RingConstructionError("Matrix size must be positive")
        b, width = base.order, k * k
        order = b ** width
        self._require_order(order)

        digits = _mixed_radix_digits(order, b, width)
        weights = b ** np.arange(width - 1, -1, -1, dtype=np.int64)
        add, mul = base.add_table, base.mul_table

        sum_index = np.zeros((order, order), dtype=np.int64)
        prod_index = np.zeros((order, order), dtype=np.int64)
        for t in range(width):
            sum_index += add[digits[:, None, t], digits[None, :, t]] * weights[t]
        for i in range(k):
            for j in range(k):
                acc = np.full((order, order), base.zero, dtype=np.int64)
                for l in range(k):
                    term = mul[digits[:, None, i * k + l], digits[None, :, l * k + j]]
                    acc = add[acc, term]
                prod_index += acc * weights[i * k + j]

        zero_digits = np.full(width, base.zero, dtype=np.int64)
        one_digits = zero_digits.copy()
        one_digits[[i * k + i for i in range(k)]] = base.one

        ring = FiniteRing(
            order=order,
            add_table=sum_index,
            mul_table=prod_index,
            zero=int(zero_digits @ weights),
            one=int(one_digits @ weights),
            construction=Construction(kind="matrix", params={"k": k, "base_order": b}, children=(base.construction,)),
        )
        logger.debug(f"Built M_{k} over a ring of order {b}: {order} elements")
        return ring

    def matrix_index(self, ring: FiniteRing, entries: Sequence[Sequence[int]]) -> int:
        """Index of a matrix (given by base-ring entry indices) in a matrix ring."""
        if ring.construction.kind != "matrix":
            raise PreconditionError("Matrix literal used on a ring that is not a matrix ring")
        k = ring.construction.params["k"]
        flat = [int(v) for row in entries for v in row]
        if len(entries) != k or len(flat) != k * k:
            raise PreconditionError(f"Matrix literal must be {k}x{k}")
        radix = ring.construction.params["base_order"]
        index = 0
        for v in flat:
            Validators.require(Validators.validate_index(v, radix, "Matrix entry"), PreconditionError)
            index = index * radix + v
        return index

    def build_product(self, left: FiniteRing, right: FiniteRing) -> FiniteRing:
        """
        Build the direct product with index l * right.order + r.

        Raises:
            CapExceededError: If the product order exceeds the cap
        """
        order = left.order * right.order
        self._require_order(order)
        idx = np.arange(order, dtype=np.int64)
        lhs, rhs = idx // right.order, idx % right.order
        n = right.order

        ring = FiniteRing(
            order=order,
            add_table=left.add_table[lhs[:, None], lhs[None, :]].astype(np.int64) * n
            + right.add_table[rhs[:, None], rhs[None, :]],
            mul_table=left.mul_table[lhs[:, None], lhs[None, :]].astype(np.int64) * n
            + right.mul_table[rhs[:, None], rhs[None, :]],
            zero=left.zero * n + right.zero,
            one=left.one * n + right.one,
            construction=Construction(
                kind="product",
                params={"left_order": left.order, "right_order": n},
                children=(left.construction, right.construction),
            ),
        )
        logger.debug(f"Built product of orders {left.order} and {right.order}")
        return ring

    def ideal_closure(self, ring: FiniteRing, generators: Sequence[int], side: str = "two-sided") -> int:
        """
        Bitset of the ideal generated by the given elements.

        Args:
            ring: Ambient ring
            generators: Generating elements
            side: "left", "right" or "two-sided"
        """
        inside = np.zeros(ring.order, dtype=bool)
        inside[ring.zero] = True
        for g in generators:
            Validators.require(Validators.validate_index(int(g), ring.order), PreconditionError)
            inside[int(g)] = True

        while True:
            idx = np.flatnonzero(inside)
            grown = inside.copy()
            grown[ring.add_table[np.ix_(idx, idx)]] = True
            if side in ("left", "two-sided"):
                grown[ring.mul_table[:, idx]] = True
            if side in ("right", "two-sided"):
                grown[ring.mul_table[idx, :]] = True
            if grown.sum() == inside.sum():
                return bitsets.from_bool_array(inside)
            inside = grown

    def quotient_map(self, base: FiniteRing, generators: Sequence[int]) -> QuotientMap:
        """
        Build R/I for the two-sided ideal I generated by the given elements.

        Returns:
            QuotientMap: Quotient ring (normalized) with the projection R -> R/I
        """
        ideal_mask = self.ideal_closure(base, generators)
        ideal = bitsets.member_array(ideal_mask, base.order)
        return self.quotient_by_ideal(base, ideal_mask, ideal, list(generators))

    def quotient_by_ideal(self, base: FiniteRing, ideal_mask: int, ideal: np.ndarray, generators: List[int]) -> QuotientMap:
        """Quotient by an already-closed two-sided ideal given as a member array."""
        reps = base.add_table[:, ideal].min(axis=1)
        classes, projection = np.unique(reps, return_inverse=True)

        add_q = projection[base.add_table[np.ix_(classes, classes)]]
        mul_q = projection[base.mul_table[np.ix_(classes, classes)]]
        raw = FiniteRing(
            order=len(classes),
            add_table=add_q,
            mul_table=mul_q,
            zero=int(projection[base.zero]),
            one=int(projection[base.one]),
            construction=Construction(
                kind="quotient",
                params={"generators": [int(g) for g in generators]},
                children=(base.construction,),
            ),
        )
        ring, old_of_new = self._normalized(raw)
        new_of_old = np.argsort(old_of_new)
        logger.debug(f"Built quotient of order {ring.order} from a ring of order {base.order}")
        return QuotientMap(
            base=base,
            ideal_mask=ideal_mask,
            quotient=ring,
            projection=new_of_old[projection],
            representatives=tuple(int(classes[i]) for i in old_of_new),
        )

    def build_quotient(self, base: FiniteRing, generators: Sequence[int]) -> FiniteRing:
        """R/I for the ideal generated by generators."""
        return self.quotient_map(base, generators).quotient

    def from_tables(self, add_table: np.ndarray, mul_table: np.ndarray, name: str = "table") -> FiniteRing:
        """
        Import a ring from explicit tables, validating every axiom.

        Raises:
            RingConstructionError: If the tables do not define a unital ring
        """
        add_table = np.asarray(add_table, dtype=np.int64)
        mul_table = np.asarray(mul_table, dtype=np.int64)
        n = add_table.shape[0]
        self._require_order(n)
        if add_table.shape != (n, n) or mul_table.shape != (n, n):
            raise RingConstructionError("Tables must be square and of equal size")
        if add_table.min() < 0 or add_table.max() >= n or mul_table.min() < 0 or mul_table.max() >= n:
            raise RingConstructionError("Table entries out of range")

        idx = np.arange(n)
        zeros = [z for z in range(n) if np.array_equal(add_table[z], idx)]
        ones = [u for u in range(n) if np.array_equal(mul_table[u], idx) and np.array_equal(mul_table[:, u], idx)]
        if not zeros or not ones:
            raise RingConstructionError("Tables have no additive or multiplicative identity")

        raw = FiniteRing(
            order=n,
            add_table=add_table,
            mul_table=mul_table,
            zero=zeros[0],
            one=ones[0],
            construction=Construction(kind="table", params={"name": name}),
        )
        report = self.verify_ring_axioms(raw)
        if not report.passed:
            logger.error(f"Table ring '{name}' fails axioms: {report.failures[:3]}")
            raise RingConstructionError(f"Tables do not define a ring: {report.failures[0]}")
        return self.normalize(raw)

    def normalize(self, ring: FiniteRing) -> FiniteRing:
        """Re-index so that zero is 0 and one is 1 (other elements keep their relative order)."""
        return self._normalized(ring)[0]

    def _normalized(self, ring: FiniteRing) -> Tuple[FiniteRing, np.ndarray]:
        head = [ring.zero] if ring.zero == ring.one else [ring.zero, ring.one]
        rest = [x for x in range(ring.order) if x not in head]
        old_of_new = np.array(head + rest, dtype=np.int64)
        if np.array_equal(old_of_new, np.arange(ring.order)):
            return ring, old_of_new
        new_of_old = np.argsort(old_of_new)
        sub = np.ix_(old_of_new, old_of_new)
        normalized = FiniteRing(
            order=ring.order,
            add_table=new_of_old[ring.add_table[sub]],
            mul_table=new_of_old[ring.mul_table[sub]],
            zero=0,
            one=int(new_of_old[ring.one]),
            construction=ring.construction,
        )
        return normalized, old_of_new

    # Axioms and morphisms

    def verify_ring_axioms(self, ring: FiniteRing) -> AxiomReport:
        """
        Check the ring axioms on the tables.

        Associativity and distributivity are checked over all triples up to
        axiom_exhaustive_cap elements and over sample_count seeded triples above.

        Returns:
            AxiomReport: Outcome with the first failing identities
        """
        n = ring.order
        add, mul = ring.add_table, ring.mul_table
        idx = np.arange(n)
        failures: List[str] = []

        if not np.array_equal(add, add.T):
            failures.append("addition is not commutative")
        if not np.array_equal(add[ring.zero], idx):
            failures.append("zero is not an additive identity")
        if not (add == ring.zero).any(axis=1).all():
            failures.append("some element has no additive inverse")
        if not (np.array_equal(mul[ring.one], idx) and np.array_equal(mul[:, ring.one], idx)):
            failures.append("one is not a two-sided identity")

        exhaustive = n <= self.settings.axiom_exhaustive_cap
        if exhaustive:
            checked = n ** 3
            for a in range(n):
                row_add, row_mul, col_mul = add[a], mul[a], mul[:, a]
                if not np.array_equal(add[row_add], row_add[add]):
                    failures.append(f"addition not associative at a={a}")
                if not np.array_equal(mul[row_mul], row_mul[mul]):
                    failures.append(f"multiplication not associative at a={a}")
                if not np.array_equal(row_mul[add], add[row_mul[:, None], row_mul[None, :]]):
                    failures.append(f"left distributivity fails at a={a}")
                if not np.array_equal(col_mul[add], add[col_mul[:, None], col_mul[None, :]]):
                    failures.append(f"right distributivity fails at a={a}")
                if len(failures) >= 10:
                    break
        else:
            checked = self.settings.sample_count
            rng = np.random.default_rng(self.settings.seed)
            a, b, c = rng.integers(0, n, size=(3, checked))
            checks = {
                "addition not associative": add[add[a, b], c] != add[a, add[b, c]],
                "multiplication not associative": mul[mul[a, b], c] != mul[a, mul[b, c]],
                "left distributivity fails": mul[a, add[b, c]] != add[mul[a, b], mul[a, c]],
                "right distributivity fails": mul[add[b, c], a] != add[mul[b, a], mul[c, a]],
            }
            for label, bad in checks.items():
                if bad.any():
                    i = int(np.argmax(bad))
                    failures.append(f"{label} at ({a[i]},{b[i]},{c[i]})")
            logger.warning(f"Axiom check on order {n} sampled {checked} triples")

        return AxiomReport(passed=not failures, exhaustive=exhaustive, checked=checked, failures=failures[:10])

    def check_morphism(
        self,
        source: FiniteRing,
        target: FiniteRing,
        image: Sequence[int],
        name: str = "explicit",
    ) -> RingMorphism:
        """
        Validate an image array as a unital ring homomorphism.

        Args:
            source: Domain ring
            target: Codomain ring
            image: image[a] = index of the image of a
            name: Label carried by the morphism

        Returns:
            RingMorphism: Validated morphism; is_automorphism set when bijective

        Raises:
            MorphismError: Naming the first failing pair
        """
        Validators.require(Validators.validate_image(list(image), source.order, target.order), MorphismError)
        phi = np.asarray(image, dtype=np.int64)

        if phi[source.one] != target.one:
            raise MorphismError(f"One maps to {phi[source.one]}, not to {target.one}")

        n = source.order
        if n * n <= (1 << 22):
            a, b = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
            a, b = a.ravel(), b.ravel()
        else:
            rng = np.random.default_rng(self.settings.seed)
            a, b = rng.integers(0, n, size=(2, self.settings.sample_count))
            logger.warning(f"Morphism check on order {n} sampled {len(a)} pairs")

        for label, src_table, tgt_table in (
            ("additivity", source.add_table, target.add_table),
            ("multiplicativity", source.mul_table, target.mul_table),
        ):
            bad = phi[src_table[a, b]] != tgt_table[phi[a], phi[b]]
            if bad.any():
                i = int(np.argmax(bad))
                raise MorphismError(f"{label} fails at pair ({a[i]}, {b[i]})")

        bijective = source.order == target.order and len(np.unique(phi)) == n
        return RingMorphism(source=source, target=target, image=phi, is_automorphism=bijective, name=name)

    def identity_morphism(self, ring: FiniteRing) -> RingMorphism:
        return self.check_morphism(ring, ring, np.arange(ring.order), name="id")

    def frobenius(self, ring: FiniteRing) -> RingMorphism:
        """a -> a^p on a Galois field."""
        if ring.construction.kind != "galois":
            raise PreconditionError("frobenius needs a Galois field")
        p = ring.construction.params["p"]
        idx = np.arange(ring.order)
        image = idx.copy()
        for _ in range(p - 1):
            image = ring.mul_table[image, idx]
        return self.check_morphism(ring, ring, image, name="frobenius")

    def conjugation(self, ring: FiniteRing, unit: int) -> RingMorphism:
        """r -> u r u^-1."""
        Validators.require(Validators.validate_index(unit, ring.order), PreconditionError)
        inverse = int(ring_oracle(ring).unit_inverse[unit])
        if inverse < 0:
            raise PreconditionError(f"Element {unit} is not a unit")
        image = ring.mul_table[ring.mul_table[unit, :], inverse]
        return self.check_morphism(ring, ring, image, name=f"conj({unit})")

    def coordinate_swap(self, ring: FiniteRing) -> RingMorphism:
        """(a, b) -> (b, a) on a product of two equal factors."""
        construction = ring.construction
        if construction.kind != "product" or construction.children[0] != construction.children[1]:
            raise PreconditionError("swap needs a product of two equal factors")
        side = construction.params["right_order"]
        idx = np.arange(ring.order)
        image = (idx % side) * side + idx // side
        return self.check_morphism(ring, ring, image, name="swap")

    # Structure

    def units_idempotents_radical(self, ring: FiniteRing) -> RingStructure:
        """
        Units, idempotents, central idempotents, J(R) and the primitive central idempotents.

        J(R) is {x : 1 - rx is a unit for all r}.
        """
        oracle = ring_oracle(ring)
        central_idempotents = oracle.idempotents & oracle.central
        return RingStructure(
            order=ring.order,
            is_commutative=ring.is_commutative,
            units=np.flatnonzero(oracle.units).tolist(),
            idempotents=np.flatnonzero(oracle.idempotents).tolist(),
            central_idempotents=np.flatnonzero(central_idempotents).tolist(),
            jacobson_radical=np.flatnonzero(oracle.radical).tolist(),
            primitive_central_idempotents=self._primitive_central_idempotents(ring),
        )

    def _primitive_central_idempotents(self, ring: FiniteRing) -> List[int]:
        oracle = ring_oracle(ring)
        candidates = [
            int(e) for e in np.flatnonzero(oracle.idempotents & oracle.central) if int(e) != ring.zero
        ]
        # atoms of the Boolean algebra of central idempotents
        return [
            e
            for e in candidates
            if not any(f != e and ring.mul(f, e) == f for f in candidates)
        ]

    def corner(self, ring: FiniteRing, e: int) -> CornerFactor:
        """The corner ring eRe with identity e, normalized."""
        if ring.mul(e, e) != e:
            raise PreconditionError(f"Element {e} is not idempotent")
        mul = ring.mul_table
        members = np.unique(mul[mul[e, :], e])
        position = np.full(ring.order, -1, dtype=np.int64)
        position[members] = np.arange(len(members))
        sub = np.ix_(members, members)
        raw = FiniteRing(
            order=len(members),
            add_table=position[ring.add_table[sub]],
            mul_table=position[mul[sub]],
            zero=int(position[ring.zero]),
            one=int(position[e]),
            construction=Construction(kind="corner", params={"idempotent": int(e)}, children=(ring.construction,)),
        )
        corner, old_of_new = self._normalized(raw)
        return CornerFactor(idempotent=int(e), ring=corner, embedding=members[old_of_new])

    def primitive_central_idempotent_decomposition(self, ring: FiniteRing) -> List[CornerFactor]:
        """
        Split R along its primitive central idempotents.

        Returns:
            List[CornerFactor]: Pairwise orthogonal e_i summing to one, with the corners e_i R e_i
        """
        factors = [self.corner(ring, e) for e in self._primitive_central_idempotents(ring)]
        logger.debug(f"Ring of order {ring.order} splits into {[f.ring.order for f in factors]}")
        return factors
