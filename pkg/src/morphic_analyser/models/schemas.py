"""
Report models for the morphic analyser.

Every operation that returns data to the CLI returns one of these models;
JSON is produced with model_dump(mode="json") and sorted keys.
"""

from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, computed_field

from morphic_analyser.models.algebra import SubsetHandle


Side = Literal["left", "right"]


class AxiomReport(BaseModel):
    """Outcome of a ring-axiom check."""

    passed: bool = Field(..., description="All checked identities hold")
    exhaustive: bool = Field(..., description="False when triples were sampled")
    checked: int = Field(default=0, description="Number of triples or pairs checked")
    failures: List[str] = Field(default_factory=list, description="First failing identities")


class RingStructure(BaseModel):
    """Units, idempotents and the Jacobson radical of a finite ring."""

    order: int = Field(..., ge=1)
    is_commutative: bool
    units: List[int] = Field(default_factory=list)
    idempotents: List[int] = Field(default_factory=list)
    central_idempotents: List[int] = Field(default_factory=list)
    jacobson_radical: List[int] = Field(default_factory=list)
    primitive_central_idempotents: List[int] = Field(default_factory=list)


class RingReport(RingStructure):
    """Full property report of a finite ring."""

    description: str = Field(default="", description="Construction descriptor")
    left_bezout: bool = False
    right_bezout: bool = False
    left_morphic: bool = False
    right_morphic: bool = False
    left_quasi_morphic: bool = False
    right_quasi_morphic: bool = False
    regular: bool = False
    unit_regular: bool = False
    semisimple: bool = False
    simple: bool = False
    local: bool = False
    reduced: bool = False
    sampled: bool = Field(default=False, description="Element scans were sampled, not exhaustive")
    counterexamples: Dict[str, Any] = Field(default_factory=dict, description="First failing element or pair per property")

    @computed_field
    @property
    def morphic(self) -> bool:
        return self.left_morphic and self.right_morphic

    @computed_field
    @property
    def quasi_morphic(self) -> bool:
        return self.left_quasi_morphic and self.right_quasi_morphic

    @computed_field
    @property
    def bezout(self) -> bool:
        return self.left_bezout and self.right_bezout


class BezoutVerdict(BaseModel):
    """Pairwise-sum principality verdict."""

    holds: bool
    side: Side
    principal_count: int = Field(..., description="Distinct cyclic submodules examined")
    counterexample: Optional[Tuple[int, int]] = Field(default=None, description="Pair (m, n) with Rm+Rn not cyclic")


class AnnihilatorQuad(BaseModel):
    """The four annihilators attached to a ring element a and a module element m."""

    ring_element: int
    module_element: int
    ring_left: SubsetHandle = Field(..., description="ann_l^R(m)")
    ring_right: SubsetHandle = Field(..., description="ann_r^R(m)")
    module_left: SubsetHandle = Field(..., description="ann_l^M(a)")
    module_right: SubsetHandle = Field(..., description="ann_r^M(a)")


class MorphicWitness(BaseModel):
    """b with ann(a) = Rb and ann(b) = Ra on the tagged side."""

    element: int
    partner: int
    side: Literal["left", "right", "two-sided"]
    ann_a: SubsetHandle
    ann_b: SubsetHandle


class QuasiMorphicWitness(BaseModel):
    """b generating ann(a) and c with ann(c) = Ra on the tagged side."""

    element: int
    generator: int
    co_element: int
    side: Side
    coincide: bool = Field(default=False, description="b = c")


class RegularityVerdict(BaseModel):
    """Von Neumann and unit regularity of a single element."""

    element: int
    status: Literal["not_regular", "regular", "unit_regular"]
    inner_inverse: Optional[int] = None
    unit: Optional[int] = None

    @property
    def is_regular(self) -> bool:
        return self.status != "not_regular"

    @property
    def is_unit_regular(self) -> bool:
        return self.status == "unit_regular"


class AnnihilatorCharacterization(BaseModel):
    """Both sides of the two annihilator equivalences in R∝M for one triple (a, m, n)."""

    a: int
    m: int
    n: int
    a1: bool = Field(..., description="ann_l^S(0,m) = S(a,n)")
    a2: bool = Field(..., description="ann_l^R(m) = Ra and ann_l^R(a)n + Ma = M")
    b1: bool = Field(..., description="ann_l^S(a,n) = S(0,m)")
    b2: bool = Field(..., description="ann_l^M(a) = Rm, ann_l^R(a)n ∩ Ma = 0, ann_l^R(a) ∩ ann_l^R(n) = 0")

    @computed_field
    @property
    def consistent(self) -> bool:
        return self.a1 == self.a2 and self.b1 == self.b2


class PropertyReport(BaseModel):
    """Generic verification harness outcome."""

    name: str
    passed: bool = True
    checked: int = 0
    sampled: bool = False
    failures: List[Dict[str, Any]] = Field(default_factory=list)
    details: Dict[str, Any] = Field(default_factory=dict)

    def fail(self, **data: Any) -> None:
        """Record a failure (the first 25 are kept)."""
        self.passed = False
        if len(self.failures) < 25:
            self.failures.append(data)

    def check(self, condition: bool, /, **data: Any) -> bool:
        """Count one check and record data when it fails."""
        self.checked += 1
        if not condition:
            self.fail(**data)
        return condition


class LatticeEntry(BaseModel):
    """One cyclic right submodule mR and its image ann_l^R(m) = Ra."""

    submodule: SubsetHandle
    image: SubsetHandle
    module_generator: int
    ring_generator: Optional[int] = Field(default=None, description="a with Ra = image; absent if not principal")
    is_sub_bimodule: bool = False
    image_is_ideal: Optional[bool] = None


class LatticeMap(BaseModel):
    """The annihilator map from cyclic right submodules to principal left ideals."""

    entries: List[LatticeEntry] = Field(default_factory=list)
    well_defined: bool = True
    injective: bool = True
    inclusion_reversing: bool = True
    all_principal: bool = True
    strict: bool = Field(default=True, description="Two-sided morphic hypothesis enforced")
    violations: List[Dict[str, Any]] = Field(default_factory=list)

    @computed_field
    @property
    def passed(self) -> bool:
        injective = self.injective or not self.strict
        return self.well_defined and self.inclusion_reversing and self.all_principal and injective


class SigmaSummary(BaseModel):
    """Serializable view of a sigma construction."""

    generator: int
    quotient_order: int
    sigma: List[int]
    psi: List[int]
    is_automorphism: bool
    ideal: List[int]


class FactorVerdict(BaseModel):
    """Verdict for one primitive central idempotent factor."""

    idempotent: int
    ring_order: int
    module_order: int
    simple: bool
    verdict: bool
    reason: str


class ClassificationVerdict(BaseModel):
    """Predicted morphicity of R∝M from its block decomposition."""

    predicted_morphic: bool
    factors: List[FactorVerdict] = Field(default_factory=list)
    commutation_failures: List[Dict[str, int]] = Field(default_factory=list, description="Central idempotents e with em != me, each with its least m")


class ReconcileReport(BaseModel):
    """Classification prediction against the brute-force verdict."""

    description: str
    predicted_morphic: bool
    brute_force_morphic: bool
    classification: ClassificationVerdict
    counterexample: Optional[Dict[str, int]] = None

    @computed_field
    @property
    def passed(self) -> bool:
        return self.predicted_morphic == self.brute_force_morphic


class PartnerReport(BaseModel):
    """Certification of a morphic partner in R∝Q/R."""

    element: Dict[str, Any]
    partner: Dict[str, Any]
    closed_form: bool
    sampled: bool
    samples: int
    witness: Optional[Dict[str, Any]] = Field(default=None, description="Element separating the two sides")

    @computed_field
    @property
    def passed(self) -> bool:
        return self.closed_form and self.sampled


class DiagonalizationSummary(BaseModel):
    """Serializable view of a diagonalization."""

    size: int
    d: List[List[Any]]
    u: List[List[Any]]
    v: List[List[Any]]
    op_log: List[Dict[str, Any]]
    verified: bool


class CommandReport(BaseModel):
    """Envelope emitted by the CLI."""

    command: str
    spec: Optional[str] = None
    seed: int
    passed: bool
    result: Dict[str, Any] = Field(default_factory=dict)


class SuiteReport(BaseModel):
    """Outcome of the full property suite, one report per check."""

    reports: Dict[str, PropertyReport] = Field(default_factory=dict)

    @computed_field
    @property
    def passed(self) -> bool:
        return all(report.passed for report in self.reports.values())

    @computed_field
    @property
    def failed(self) -> List[str]:
        return sorted(name for name, report in self.reports.items() if not report.passed)
