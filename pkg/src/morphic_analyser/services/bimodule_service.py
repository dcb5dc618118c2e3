"""
Finite (R,R)-bimodules: constructors, annihilators, cyclic submodules and
the pairwise Bézout decision.

For finite structures every one-sided ideal or submodule is finitely
generated, so "every pair Rm + Rn is cyclic" implies by induction on the
number of generators that every submodule is cyclic; the pairwise test is
therefore used as the definition of Bézout.
"""

from collections import defaultdict
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
from loguru import logger

from morphic_analyser.config import Settings, get_settings
from morphic_analyser.models.algebra import (
    Construction,
    CornerFactor,
    FiniteBimodule,
    FiniteRing,
    RingMorphism,
    SubsetHandle,
)
from morphic_analyser.models.schemas import AnnihilatorQuad, AxiomReport, BezoutVerdict, PropertyReport
from morphic_analyser.services.ring_service import ring_oracle
from morphic_analyser.utils import bitsets
from morphic_analyser.utils.validators import BimoduleError, CapExceededError, PreconditionError, Validators


Structure = Union[FiniteRing, FiniteBimodule]


class ModuleOracle:
    """Memoized cyclic submodules and annihilators of one bimodule."""

    def __init__(self, module: FiniteBimodule):
        self.module = module

    @cached_property
    def left_cyclic(self) -> List[int]:
        """Rm for every m."""
        n = self.module.order
        flags = np.zeros((n, n), dtype=bool)
        flags[np.arange(n)[:, None], self.module.left_action.T] = True
        return bitsets.rows_to_masks(flags)

    @cached_property
    def right_cyclic(self) -> List[int]:
        """mR for every m."""
        n = self.module.order
        flags = np.zeros((n, n), dtype=bool)
        flags[np.arange(n)[:, None], self.module.right_action] = True
        return bitsets.rows_to_masks(flags)

    @cached_property
    def ring_left_annihilators(self) -> List[int]:
        """ann_l^R(m) = {r : rm = 0} for every m (ring-order bitsets)."""
        return bitsets.rows_to_masks(self.module.left_action.T == self.module.zero)

    @cached_property
    def ring_right_annihilators(self) -> List[int]:
        """ann_r^R(m) = {r : mr = 0} for every m."""
        return bitsets.rows_to_masks(self.module.right_action == self.module.zero)

    @cached_property
    def module_left_annihilators(self) -> List[int]:
        """ann_l^M(a) = {m : am = 0} for every ring element a (module-order bitsets)."""
        return bitsets.rows_to_masks(self.module.left_action == self.module.zero)

    @cached_property
    def module_right_annihilators(self) -> List[int]:
        """ann_r^M(a) = {m : ma = 0} for every ring element a."""
        return bitsets.rows_to_masks(self.module.right_action.T == self.module.zero)

    def cyclic(self, m: int, side: str) -> int:
        return self.left_cyclic[m] if side == "left" else self.right_cyclic[m]

    principal = cyclic

    @cached_property
    def _generator_index(self) -> Dict[str, Dict[int, List[int]]]:
        index: Dict[str, Dict[int, List[int]]] = {"left": {}, "right": {}}
        for side, masks in (("left", self.left_cyclic), ("right", self.right_cyclic)):
            for m, mask in enumerate(masks):
                index[side].setdefault(mask, []).append(m)
        return index

    def generators(self, mask: int, side: str) -> List[int]:
        return self._generator_index[side].get(mask, [])

    def principal_masks(self, side: str) -> Dict[int, int]:
        return {mask: gens[0] for mask, gens in self._generator_index[side].items()}


@lru_cache(maxsize=256)
def module_oracle(module: FiniteBimodule) -> ModuleOracle:
    return ModuleOracle(module)


class BimoduleService:
    """Service building bimodules and computing their annihilator data."""

    def __init__(self, settings: Optional[Settings] = None):
        """
        Initialize the bimodule service.

        Args:
            settings: Run configuration (if None, loads from environment)
        """
        self.settings = settings or get_settings()

    # Constructors

    def regular_bimodule(self, ring: FiniteRing) -> FiniteBimodule:
        """R as a bimodule over itself."""
        return FiniteBimodule(
            ring=ring,
            order=ring.order,
            add_table=ring.add_table,
            left_action=ring.mul_table,
            right_action=ring.mul_table,
            zero=ring.zero,
            construction=Construction(kind="regular", children=(ring.construction,)),
        )

    def twisted_bimodule(self, ring: FiniteRing, sigma: RingMorphism) -> FiniteBimodule:
        """
        R(sigma): left action is multiplication, right action m.r = m sigma(r).

        Raises:
            BimoduleError: If sigma is not an endomorphism of ring
        """
        if sigma.source is not ring or sigma.target is not ring:
            raise BimoduleError("Twist needs an endomorphism of the same ring")
        return FiniteBimodule(
            ring=ring,
            order=ring.order,
            add_table=ring.add_table,
            left_action=ring.mul_table,
            right_action=ring.mul_table[:, sigma.image],
            zero=ring.zero,
            construction=Construction(
                kind="twisted",
                params={"sigma": sigma.name, "image": sigma.image.tolist()},
                children=(ring.construction,),
            ),
        )

    def zero_bimodule(self, ring: FiniteRing) -> FiniteBimodule:
        return FiniteBimodule(
            ring=ring,
            order=1,
            add_table=np.zeros((1, 1), dtype=np.int64),
            left_action=np.zeros((ring.order, 1), dtype=np.int64),
            right_action=np.zeros((1, ring.order), dtype=np.int64),
            zero=0,
            construction=Construction(kind="zero", children=(ring.construction,)),
        )

    def direct_sum(self, first: FiniteBimodule, second: FiniteBimodule) -> FiniteBimodule:
        """M + N with index m * |N| + n."""
        if first.ring is not second.ring:
            raise BimoduleError("Direct summands must share their ring")
        order = first.order * second.order
        Validators.require(Validators.validate_order(order, self.settings.order_cap, "Bimodule"), CapExceededError)
        idx = np.arange(order, dtype=np.int64)
        fi, si = idx // second.order, idx % second.order
        n = second.order
        return FiniteBimodule(
            ring=first.ring,
            order=order,
            add_table=first.add_table[fi[:, None], fi[None, :]].astype(np.int64) * n
            + second.add_table[si[:, None], si[None, :]],
            left_action=first.left_action[:, fi].astype(np.int64) * n + second.left_action[:, si],
            right_action=first.right_action[fi, :].astype(np.int64) * n + second.right_action[si, :],
            zero=first.zero * n + second.zero,
            construction=Construction(kind="direct-sum", children=(first.construction, second.construction)),
        )

    def submodule_closure(self, module: FiniteBimodule, generators: Sequence[int]) -> int:
        """Bitset of the sub-bimodule generated by the given elements."""
        inside = np.zeros(module.order, dtype=bool)
        inside[module.zero] = True
        for g in generators:
            Validators.require(Validators.validate_index(int(g), module.order), PreconditionError)
            inside[int(g)] = True
        while True:
            idx = np.flatnonzero(inside)
            grown = inside.copy()
            grown[module.add_table[np.ix_(idx, idx)]] = True
            grown[module.left_action[:, idx]] = True
            grown[module.right_action[idx, :]] = True
            if grown.sum() == inside.sum():
                return bitsets.from_bool_array(inside)
            inside = grown

    def sub_bimodule(self, module: FiniteBimodule, mask: int) -> FiniteBimodule:
        """
        Restrict to a sub-bimodule given as a bitset.

        Raises:
            ValidationError: If the subset is not a sub-bimodule
        """
        SubsetHandle.create(module, mask, "sub_bimodule")
        members = bitsets.member_array(mask, module.order)
        position = np.full(module.order, -1, dtype=np.int64)
        position[members] = np.arange(len(members))
        return FiniteBimodule(
            ring=module.ring,
            order=len(members),
            add_table=position[module.add_table[np.ix_(members, members)]],
            left_action=position[module.left_action[:, members]],
            right_action=position[module.right_action[members, :]],
            zero=int(position[module.zero]),
            construction=Construction(kind="sub", params={"members": members.tolist()}, children=(module.construction,)),
        )

    def quotient_bimodule(self, module: FiniteBimodule, generators: Sequence[int]) -> FiniteBimodule:
        """M / N for the sub-bimodule N generated by the given elements."""
        sub = bitsets.member_array(self.submodule_closure(module, generators), module.order)
        reps = module.add_table[:, sub].min(axis=1)
        classes, projection = np.unique(reps, return_inverse=True)
        logger.debug(f"Quotient bimodule of order {len(classes)} from order {module.order}")
        return FiniteBimodule(
            ring=module.ring,
            order=len(classes),
            add_table=projection[module.add_table[np.ix_(classes, classes)]],
            left_action=projection[module.left_action[:, classes]],
            right_action=projection[module.right_action[classes, :]],
            zero=int(projection[module.zero]),
            construction=Construction(
                kind="quotient",
                params={"generators": [int(g) for g in generators]},
                children=(module.construction,),
            ),
        )

    def corner_bimodule(self, module: FiniteBimodule, factor: CornerFactor) -> FiniteBimodule:
        """eMe as a bimodule over the corner ring eRe."""
        e = factor.idempotent
        members = np.unique(module.left_action[e][module.right_action[:, e]])
        position = np.full(module.order, -1, dtype=np.int64)
        position[members] = np.arange(len(members))
        lifts = factor.embedding
        return FiniteBimodule(
            ring=factor.ring,
            order=len(members),
            add_table=position[module.add_table[np.ix_(members, members)]],
            left_action=position[module.left_action[np.ix_(lifts, members)]],
            right_action=position[module.right_action[np.ix_(members, lifts)]],
            zero=int(position[module.zero]),
            construction=Construction(kind="corner", params={"idempotent": int(e)}, children=(module.construction,)),
        )

    def verify_bimodule_axioms(self, module: FiniteBimodule) -> AxiomReport:
        """
        Check the group, action, compatibility and unit axioms.

        Exhaustive when ring.order * order <= 2^16, sampled above.
        """
        ring, n = module.ring, module.order
        add, left, right, mul = module.add_table, module.left_action, module.right_action, ring.mul_table
        idx = np.arange(n)
        failures: List[str] = []

        if not np.array_equal(add, add.T) or not np.array_equal(add[module.zero], idx):
            failures.append("module addition is not an abelian group law")
        if not np.array_equal(left[ring.one], idx) or not np.array_equal(right[:, ring.one], idx):
            failures.append("one does not act as the identity")

        exhaustive = ring.order * n <= (1 << 16)
        if exhaustive:
            for r in range(ring.order):
                if not np.array_equal(left[mul[r, :], :], left[r][left]):
                    failures.append(f"left action not associative at r={r}")
                if not np.array_equal(right[right[:, r], :], right[:, mul[r, :]]):
                    failures.append(f"right action not associative at r={r}")
                if not np.array_equal(right[left[r, :], :], left[r][right]):
                    failures.append(f"(rm)s != r(ms) at r={r}")
                if not np.array_equal(left[r][add], add[left[r][:, None], left[r][None, :]]):
                    failures.append(f"r(m+n) != rm+rn at r={r}")
                col = right[:, r]
                if not np.array_equal(col[add], add[col[:, None], col[None, :]]):
                    failures.append(f"(m+n)r != mr+nr at r={r}")
                if len(failures) >= 10:
                    break
            for m in range(n):
                col, row = left[:, m], right[m]
                if not np.array_equal(col[ring.add_table], add[col[:, None], col[None, :]]):
                    failures.append(f"(r+s)m != rm+sm at m={m}")
                if not np.array_equal(row[ring.add_table], add[row[:, None], row[None, :]]):
                    failures.append(f"m(r+s) != mr+ms at m={m}")
                if len(failures) >= 10:
                    break
            checked = ring.order * ring.order * n
        else:
            checked = self.settings.sample_count
            rng = np.random.default_rng(self.settings.seed)
            r, s = rng.integers(0, ring.order, size=(2, checked))
            m, k = rng.integers(0, n, size=(2, checked))
            checks = {
                "left action not associative": left[mul[r, s], m] != left[r, left[s, m]],
                "right action not associative": right[right[m, r], s] != right[m, mul[r, s]],
                "(rm)s != r(ms)": right[left[r, m], s] != left[r, right[m, s]],
                "r(m+n) != rm+rn": left[r, add[m, k]] != add[left[r, m], left[r, k]],
                "(r+s)m != rm+sm": left[ring.add_table[r, s], m] != add[left[r, m], left[s, m]],
                "(m+n)r != mr+nr": right[add[m, k], r] != add[right[m, r], right[k, r]],
                "m(r+s) != mr+ms": right[m, ring.add_table[r, s]] != add[right[m, r], right[m, s]],
            }
            for label, bad in checks.items():
                if bad.any():
                    failures.append(label)
            logger.warning(f"Bimodule axiom check sampled {checked} tuples")

        return AxiomReport(passed=not failures, exhaustive=exhaustive, checked=checked, failures=failures[:10])

    # Annihilators and cyclic submodules

    def left_annihilator_of_module_element(self, module: FiniteBimodule, m: int) -> SubsetHandle:
        """ann_l^R(m) = {r : rm = 0}, verified to be a left ideal."""
        Validators.require(Validators.validate_index(m, module.order), PreconditionError)
        mask = module_oracle(module).ring_left_annihilators[m]
        return SubsetHandle.create(module.ring, mask, "left_ideal")

    def annihilators_all(self, module: FiniteBimodule, a: int, m: int) -> AnnihilatorQuad:
        """
        The four annihilators of a ring element a and a module element m.

        Args:
            module: Bimodule M over R
            a: Ring element index
            m: Module element index

        Returns:
            AnnihilatorQuad: ann_l^R(m), ann_r^R(m), ann_l^M(a), ann_r^M(a)
        """
        Validators.require(Validators.validate_index(a, module.ring.order, "Ring element"), PreconditionError)
        Validators.require(Validators.validate_index(m, module.order, "Module element"), PreconditionError)
        oracle = module_oracle(module)
        return AnnihilatorQuad(
            ring_element=a,
            module_element=m,
            ring_left=SubsetHandle.create(module.ring, oracle.ring_left_annihilators[m], "left_ideal"),
            ring_right=SubsetHandle.create(module.ring, oracle.ring_right_annihilators[m], "right_ideal"),
            module_left=SubsetHandle.create(module, oracle.module_left_annihilators[a], "left_submodule"),
            module_right=SubsetHandle.create(module, oracle.module_right_annihilators[a], "right_submodule"),
        )

    def cyclic_submodule(self, module: FiniteBimodule, m: int, side: str = "left") -> SubsetHandle:
        """Rm (left) or mR (right)."""
        Validators.require(Validators.validate_index(m, module.order), PreconditionError)
        mask = module_oracle(module).cyclic(m, side)
        return SubsetHandle.create(module, mask, "left_submodule" if side == "left" else "right_submodule")

    def _principal_data(self, structure: Structure):
        if isinstance(structure, FiniteRing):
            return ring_oracle(structure)
        return module_oracle(structure)

    def principal_generator(self, structure: Structure, subset: SubsetHandle, side: str = "left") -> Optional[int]:
        """
        Least g in the subset with Rg (or gR) equal to it, or None.

        Any generator g satisfies g = 1.g inside the subset, so searching
        the subset is complete.
        """
        oracle = self._principal_data(structure)
        generators = oracle.generators(subset.mask, side)
        return generators[0] if generators else None

    def is_bezout(
        self,
        structure: Structure,
        side: str = "left",
        elements: Optional[Sequence[int]] = None,
    ) -> BezoutVerdict:
        """
        Decide whether every sum Rm + Rn (or mR + nR) is cyclic.

        A sum of cyclic submodules A and B has |A||B|/|A ∩ B| elements, and it
        is cyclic exactly when some cyclic submodule containing A and B has that
        size.

        Args:
            structure: Ring or bimodule
            side: "left" or "right"
            elements: Restrict the pairs to these elements (sampled scans)

        Returns:
            BezoutVerdict: With the least-index counterexample pair on failure
        """
        oracle = self._principal_data(structure)
        if elements is not None:
            return self._sampled_bezout(structure, oracle, side, elements)

        principals = oracle.principal_masks(side)
        by_size: Dict[int, List[int]] = defaultdict(list)
        for mask in principals:
            by_size[bitsets.size(mask)].append(mask)

        masks = sorted(principals, key=lambda mask: principals[mask])
        for i, first in enumerate(masks):
            for second in masks[i + 1:]:
                if bitsets.is_subset(first, second) or bitsets.is_subset(second, first):
                    continue
                union = first | second
                target = bitsets.size(first) * bitsets.size(second) // bitsets.size(first & second)
                if not any(bitsets.is_subset(union, c) for c in by_size.get(target, ())):
                    pair = (principals[first], principals[second])
                    logger.debug(f"Not {side} Bezout: sum of cyclic submodules at {pair} is not cyclic")
                    return BezoutVerdict(holds=False, side=side, principal_count=len(masks), counterexample=pair)
        return BezoutVerdict(holds=True, side=side, principal_count=len(masks))

    def _sampled_bezout(self, structure: Structure, oracle, side: str, elements: Sequence[int]) -> BezoutVerdict:
        principals: Dict[int, int] = {}
        for x in sorted(int(e) for e in elements):
            principals.setdefault(oracle.principal(x, side), x)
        masks = list(principals)
        order = structure.order
        for i, first in enumerate(masks):
            for second in masks[i + 1:]:
                total = bitsets.from_index_array(
                    structure.add_table[np.ix_(bitsets.member_array(first, order), bitsets.member_array(second, order))],
                    order,
                )
                if not oracle.generators(total, side):
                    pair = (principals[first], principals[second])
                    return BezoutVerdict(holds=False, side=side, principal_count=len(masks), counterexample=pair)
        logger.warning(f"{side} Bezout decided on {len(masks)} sampled cyclic submodules")
        return BezoutVerdict(holds=True, side=side, principal_count=len(masks))

    def verify_bezout_triples(self, structure: Structure, side: str = "left", samples: int = 200) -> PropertyReport:
        """For a Bézout structure, check that seeded random Rx + Ry + Rz are cyclic."""
        report = PropertyReport(name=f"{side}_bezout_triples", sampled=True)
        if not self.is_bezout(structure, side).holds:
            report.details["skipped"] = "not Bezout"
            return report

        oracle = self._principal_data(structure)
        principals = oracle.principal_masks(side)
        add, order = structure.add_table, structure.order
        rng = np.random.default_rng(self.settings.seed)
        for x, y, z in rng.integers(0, order, size=(samples, 3)):
            total = oracle.principal(int(x), side)
            for w in (y, z):
                part = oracle.principal(int(w), side)
                left_idx = bitsets.member_array(total, order)
                right_idx = bitsets.member_array(part, order)
                total = bitsets.from_index_array(add[np.ix_(left_idx, right_idx)], order)
            report.check(total in principals, triple=[int(x), int(y), int(z)])
        return report
