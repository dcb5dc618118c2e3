"""
Table-driven algebraic structures: finite rings, morphisms, bimodules,
trivial extensions and verified element subsets.

Elements are indexed 0..order-1 and every operation is a table lookup.
Structures are immutable once built; validation lives in the services.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Literal, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field

from morphic_analyser.utils import bitsets
from morphic_analyser.utils.validators import ValidationError


class Construction(BaseModel):
    """Descriptor tree recording how a structure was built."""

    model_config = ConfigDict(frozen=True)

    kind: str = Field(..., description="cyclic | galois | matrix | product | quotient | trivial-extension | table | corner | ...")
    params: Dict[str, Any] = Field(default_factory=dict)
    children: Tuple["Construction", ...] = Field(default_factory=tuple)

    def describe(self) -> str:
        """Compact human-readable rendering."""
        inner = [f"{k}={v}" for k, v in sorted(self.params.items())]
        inner += [c.describe() for c in self.children]
        return f"{self.kind}({', '.join(inner)})"


def _freeze(table: np.ndarray) -> np.ndarray:
    table = np.ascontiguousarray(table, dtype=np.int32)
    table.setflags(write=False)
    return table


@dataclass(frozen=True, eq=False)
class FiniteRing:
    """A finite associative unital ring given by dense operation tables."""

    order: int
    add_table: np.ndarray
    mul_table: np.ndarray
    zero: int
    one: int
    construction: Construction

    def __post_init__(self):
        object.__setattr__(self, "add_table", _freeze(self.add_table))
        object.__setattr__(self, "mul_table", _freeze(self.mul_table))
        shape = (self.order, self.order)
        if self.add_table.shape != shape or self.mul_table.shape != shape:
            raise ValidationError(f"Tables must have shape {shape}")

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    @cached_property
    def neg_table(self) -> np.ndarray:
        """Additive inverses: neg_table[a] is the b with a + b = 0."""
        table = np.argmax(self.add_table == self.zero, axis=1).astype(np.int32)
        table.setflags(write=False)
        return table

    @cached_property
    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.mul_table, self.mul_table.T))

    @property
    def elements(self) -> range:
        return range(self.order)

    def same_tables(self, other: "FiniteRing") -> bool:
        """Table-for-table equality (same indexing)."""
        return (
            self.order == other.order
            and self.zero == other.zero
            and self.one == other.one
            and np.array_equal(self.add_table, other.add_table)
            and np.array_equal(self.mul_table, other.mul_table)
        )

    def describe(self) -> str:
        return self.construction.describe()


@dataclass(frozen=True, eq=False)
class RingMorphism:
    """A validated unital ring homomorphism given by its image array."""

    source: FiniteRing
    target: FiniteRing
    image: np.ndarray
    is_automorphism: bool
    name: str = "explicit"

    def __post_init__(self):
        image = np.ascontiguousarray(self.image, dtype=np.int32)
        image.setflags(write=False)
        object.__setattr__(self, "image", image)

    def __call__(self, a: int) -> int:
        return int(self.image[a])

    @property
    def is_identity(self) -> bool:
        return self.source is self.target and bool(np.array_equal(self.image, np.arange(self.source.order)))


@dataclass(frozen=True, eq=False)
class FiniteBimodule:
    """An (R,R)-bimodule given by its addition table and the two action tables."""

    ring: FiniteRing
    order: int
    add_table: np.ndarray
    left_action: np.ndarray   # left_action[r, m] = r·m
    right_action: np.ndarray  # right_action[m, r] = m·r
    zero: int
    construction: Construction

    def __post_init__(self):
        for name in ("add_table", "left_action", "right_action"):
            object.__setattr__(self, name, _freeze(getattr(self, name)))
        n, k = self.order, self.ring.order
        if self.add_table.shape != (n, n):
            raise ValidationError(f"Module addition table must have shape {(n, n)}")
        if self.left_action.shape != (k, n) or self.right_action.shape != (n, k):
            raise ValidationError("Action tables do not match ring and module orders")

    def add(self, m: int, n: int) -> int:
        return int(self.add_table[m, n])

    def act_left(self, r: int, m: int) -> int:
        return int(self.left_action[r, m])

    def act_right(self, m: int, r: int) -> int:
        return int(self.right_action[m, r])

    @cached_property
    def neg_table(self) -> np.ndarray:
        table = np.argmax(self.add_table == self.zero, axis=1).astype(np.int32)
        table.setflags(write=False)
        return table

    def same_tables(self, other: "FiniteBimodule") -> bool:
        return (
            self.order == other.order
            and self.zero == other.zero
            and np.array_equal(self.add_table, other.add_table)
            and np.array_equal(self.left_action, other.left_action)
            and np.array_equal(self.right_action, other.right_action)
        )


@dataclass(frozen=True, eq=False)
class TrivialExtensionRing:
    """R∝M materialized as a FiniteRing; index = r·|M| + m."""

    base: FiniteRing
    bimodule: FiniteBimodule
    as_ring: FiniteRing

    def encode(self, r: int, m: int) -> int:
        return r * self.bimodule.order + m

    def decode(self, index: int) -> Tuple[int, int]:
        r, m = divmod(int(index), self.bimodule.order)
        return r, m

    def render(self, index: int) -> Dict[str, int]:
        r, m = self.decode(index)
        return {"r": r, "m": m}

    @property
    def module_ideal(self) -> List[int]:
        """Indices of the square-zero ideal 0∝M."""
        return [self.encode(self.base.zero, m) for m in range(self.bimodule.order)]


SubsetRole = Literal[
    "subset",
    "left_ideal",
    "right_ideal",
    "ideal",
    "left_submodule",
    "right_submodule",
    "sub_bimodule",
]


class SubsetHandle(BaseModel):
    """A bitset of ring or module elements, closure-checked for its role on creation."""

    model_config = ConfigDict(frozen=True)

    parent: Literal["ring", "module"]
    order: int
    role: SubsetRole = "subset"
    mask: int = Field(..., exclude=True)

    @computed_field
    @property
    def members(self) -> List[int]:
        return bitsets.members(self.mask)

    @property
    def size(self) -> int:
        return bitsets.size(self.mask)

    def __contains__(self, index: int) -> bool:
        return bitsets.contains(self.mask, index)

    def same_set(self, other: "SubsetHandle") -> bool:
        return self.parent == other.parent and self.mask == other.mask

    @classmethod
    def create(cls, structure, mask: int, role: SubsetRole = "subset") -> "SubsetHandle":
        """
        Build a handle after checking closure for the claimed role.

        Args:
            structure: FiniteRing (parent "ring") or FiniteBimodule (parent "module")
            mask: Member bitset
            role: Closure the subset must satisfy

        Raises:
            ValidationError: If the subset is not closed as claimed
        """
        is_ring = isinstance(structure, FiniteRing)
        parent = "ring" if is_ring else "module"
        if is_ring and role in ("left_submodule", "right_submodule", "sub_bimodule"):
            raise ValidationError(f"Role {role} needs a module parent")
        if not is_ring and role in ("left_ideal", "right_ideal", "ideal"):
            raise ValidationError(f"Role {role} needs a ring parent")

        if role != "subset":
            _check_closure(structure, mask, role)
        return cls(parent=parent, order=structure.order, role=role, mask=mask)


def _check_closure(structure, mask: int, role: str) -> None:
    idx = bitsets.member_array(mask, structure.order)
    inside = bitsets.to_bool_array(mask, structure.order)
    if not inside[structure.zero]:
        raise ValidationError(f"Subset claimed as {role} does not contain zero")
    if not inside[structure.add_table[np.ix_(idx, idx)]].all():
        raise ValidationError(f"Subset claimed as {role} is not closed under addition")

    if isinstance(structure, FiniteRing):
        left = structure.mul_table[:, idx]
        right = structure.mul_table[idx, :]
    else:
        left = structure.left_action[:, idx]
        right = structure.right_action[idx, :]

    if role in ("left_ideal", "ideal", "left_submodule", "sub_bimodule") and not inside[left].all():
        raise ValidationError(f"Subset claimed as {role} is not closed under left multiplication")
    if role in ("right_ideal", "ideal", "right_submodule", "sub_bimodule") and not inside[right].all():
        raise ValidationError(f"Subset claimed as {role} is not closed under right multiplication")


@dataclass(frozen=True, eq=False)
class QuotientMap:
    """A quotient ring R/I with the projection R -> R/I as an index array."""

    base: FiniteRing
    ideal_mask: int
    quotient: FiniteRing
    projection: np.ndarray
    representatives: Tuple[int, ...] = field(default_factory=tuple)

    def project(self, r: int) -> int:
        return int(self.projection[r])


@dataclass(frozen=True, eq=False)
class CornerFactor:
    """A corner ring eRe of a central idempotent e, with its embedding into R."""

    idempotent: int
    ring: FiniteRing
    embedding: np.ndarray  # corner index -> R index

    def lift(self, x: int) -> int:
        return int(self.embedding[x])


@dataclass(frozen=True, eq=False)
class SigmaConstruction:
    """
    A left-cyclic bimodule M = Rx presented as R̄(sigma), R̄ = R/ann_l^R(x).

    psi[q] is the module element s·x for the class q = s̄.
    """

    module: FiniteBimodule
    generator: int
    quotient: QuotientMap
    sigma: RingMorphism
    psi: np.ndarray
    is_automorphism: bool

    def __call__(self, q: int) -> int:
        return int(self.psi[q])


Construction.model_rebuild()
