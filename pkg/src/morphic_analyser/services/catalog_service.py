"""
The built-in catalog of desk-scale rings and bimodules, and the builder
turning parsed specifications into structures.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Union

from loguru import logger

from morphic_analyser.config import Settings, get_settings
from morphic_analyser.models.algebra import FiniteBimodule, FiniteRing, RingMorphism, TrivialExtensionRing
from morphic_analyser.services.bimodule_service import BimoduleService
from morphic_analyser.services.extension_service import ExtensionService
from morphic_analyser.services.ring_service import RingService
from morphic_analyser.utils.spec_parser import SpecNode, SpecParseError, load_table, parse_spec
from morphic_analyser.utils.validators import BimoduleError, MorphismError, PreconditionError, RingConstructionError

Structure = Union[FiniteRing, FiniteBimodule, TrivialExtensionRing]

F4 = "GF(2, x^2+x+1)"
F2xF2 = "Prod(Z(2), Z(2))"
M2F2 = "Mat(2, Z(2))"
SQUARE_ZERO = 'Table("f2xy_square_zero")'


@dataclass(frozen=True)
class CatalogEntry:
    """A named specification; kind is 'ring' or 'extension'."""

    name: str
    spec: str
    kind: str


_RINGS = [
    *[(f"Z{n}", f"Z({n})") for n in (2, 3, 4, 6, 8, 9, 12, 16)],
    ("F2", "GF(2, x+1)"),
    ("F4", F4),
    ("F8", "GF(2, x^3+x+1)"),
    ("F3", "GF(3, x+1)"),
    ("F9", "GF(3, x^2+1)"),
    ("M2(F2)", M2F2),
    ("M2(F4)", f"Mat(2, {F4})"),
    ("F2xF2", F2xF2),
    ("F2xF3", "Prod(Z(2), Z(3))"),
    ("F2xZ4", "Prod(Z(2), Z(4))"),
    ("F4xF2", f"Prod({F4}, Z(2))"),
    ("F2xF2xF2", f"Prod({F2xF2}, Z(2))"),
    ("F2[x,y]/(x,y)^2", SQUARE_ZERO),
]

_EXTENSIONS = [
    ("Z2*Z2", "TrivExt(Z(2), Reg(Z(2)))"),
    ("Z4*Z4", "TrivExt(Z(4), Reg(Z(4)))"),
    ("Z6*Z6", "TrivExt(Z(6), Reg(Z(6)))"),
    ("Z4*0", "TrivExt(Z(4), Zero(Z(4)))"),
    ("Z3*0", "TrivExt(Z(3), Zero(Z(3)))"),
    ("Z6*Z2", "TrivExt(Z(6), Quot(Reg(Z(6)), [2]))"),
    ("F2*F2^2", "TrivExt(Z(2), Sum(Reg(Z(2)), Reg(Z(2))))"),
    ("F9*F9", "TrivExt(GF(3, x^2+1), Reg(GF(3, x^2+1)))"),
    ("F4*F4(frobenius)", f"TrivExt({F4}, Twist({F4}, frobenius))"),
    ("F2xF2*regular", f"TrivExt({F2xF2}, Reg({F2xF2}))"),
    ("F2xF2*id", f"TrivExt({F2xF2}, Twist({F2xF2}, id))"),
    ("F2xF2*swap", f"TrivExt({F2xF2}, Twist({F2xF2}, swap))"),
    ("F2xF3*regular", "TrivExt(Prod(Z(2), Z(3)), Reg(Prod(Z(2), Z(3))))"),
    ("M2(F2)*M2(F2)", f"TrivExt({M2F2}, Reg({M2F2}))"),
    ("M2(F2)*conj", f"TrivExt({M2F2}, Twist({M2F2}, conj([[1, 1], [0, 1]])))"),
    ("square-zero*0", f"TrivExt({SQUARE_ZERO}, Zero({SQUARE_ZERO}))"),
]


class CatalogService:
    """Service building structures from specifications, with per-spec memoization."""

    def __init__(self, settings: Optional[Settings] = None):
        """
        Initialize the catalog service.

        Args:
            settings: Run configuration (if None, loads from environment)
        """
        self.settings = settings or get_settings()
        self.rings = RingService(self.settings)
        self.bimodules = BimoduleService(self.settings)
        self.extensions = ExtensionService(self.settings)
        self._built: Dict[SpecNode, Structure] = {}

    def catalog(self) -> List[CatalogEntry]:
        """Every built-in specification, rings first."""
        return [CatalogEntry(name, spec, "ring") for name, spec in _RINGS] + [
            CatalogEntry(name, spec, "extension") for name, spec in _EXTENSIONS
        ]

    def entry(self, name: str) -> CatalogEntry:
        for entry in self.catalog():
            if entry.name == name:
                return entry
        raise PreconditionError(f"No catalog entry named '{name}'")

    # Building

    def build(self, spec: Union[str, SpecNode]) -> Structure:
        """
        Build the structure a specification describes.

        Raises:
            SpecParseError: On syntax errors and on semantic errors with a span
            CapExceededError: If a construction exceeds the configured caps
        """
        node = parse_spec(spec) if isinstance(spec, str) else spec
        if node not in self._built:
            self._built[node] = self._build(node)
        return self._built[node]

    def build_ring(self, spec: Union[str, SpecNode]) -> FiniteRing:
        """The ring a ring specification describes (a trivial extension as its ring)."""
        built = self.build(spec)
        if isinstance(built, TrivialExtensionRing):
            return built.as_ring
        if not isinstance(built, FiniteRing):
            raise SpecParseError("Expected a ring specification")
        return built

    def build_extension(self, spec: Union[str, SpecNode]) -> TrivialExtensionRing:
        built = self.build(spec)
        if not isinstance(built, TrivialExtensionRing):
            raise SpecParseError("Expected a TrivExt(...) specification")
        return built

    def _build(self, node: SpecNode) -> Structure:
        kind, args = node.kind, node.args
        logger.debug(f"Building {kind} at {node.span}")
        try:
            if kind == "Z":
                return self.rings.build_cyclic(args[0])
            if kind == "GF":
                return self.rings.build_galois(args[0], args[1])
            if kind == "Mat":
                return self.rings.build_matrix_ring(args[0], self.build_ring(args[1]))
            if kind == "Prod":
                return self.rings.build_product(self.build_ring(args[0]), self.build_ring(args[1]))
            if kind == "Table":
                add, mul = load_table(args[0])
                return self.rings.from_tables(add, mul, name=args[0])
            if kind == "TrivExt":
                ring = self.build_ring(args[0])
                return self.extensions.build_trivial_extension(ring, self._module(args[1]))
            if kind == "Reg":
                return self.bimodules.regular_bimodule(self.build_ring(args[0]))
            if kind == "Zero":
                return self.bimodules.zero_bimodule(self.build_ring(args[0]))
            if kind == "Twist":
                ring = self.build_ring(args[0])
                return self.bimodules.twisted_bimodule(ring, self.endomorphism(ring, args[1]))
            if kind == "Sum":
                return self.bimodules.direct_sum(self._module(args[0]), self._module(args[1]))
            if kind == "Quot" and args[0].sort == "module":
                return self.bimodules.quotient_bimodule(self._module(args[0]), list(args[1]))
            if kind == "Quot":
                return self.rings.build_quotient(self.build_ring(args[0]), list(args[1]))
        except (PreconditionError, MorphismError, RingConstructionError, BimoduleError) as e:
            raise SpecParseError(str(e), node.span) from e
        raise SpecParseError(f"Cannot build '{kind}'", node.span)

    def _module(self, node: SpecNode) -> FiniteBimodule:
        built = self.build(node)
        if not isinstance(built, FiniteBimodule):
            raise SpecParseError("Expected a module specification", node.span)
        return built

    def endomorphism(self, ring: FiniteRing, node: SpecNode) -> RingMorphism:
        """
        Resolve id, frobenius, swap, conj(u) or an explicit image list on a ring.

        Raises:
            SpecParseError: If the endomorphism does not apply to the ring
        """
        try:
            if node.kind == "id":
                return self.rings.identity_morphism(ring)
            if node.kind == "frobenius":
                return self.rings.frobenius(ring)
            if node.kind == "swap":
                return self.rings.coordinate_swap(ring)
            if node.kind == "conj":
                argument = node.args[0]
                unit = argument if isinstance(argument, int) else self.rings.matrix_index(ring, argument)
                return self.rings.conjugation(ring, unit)
            if node.kind == "image":
                return self.rings.check_morphism(ring, ring, list(node.args[0]))
        except (PreconditionError, MorphismError) as e:
            raise SpecParseError(str(e), node.span) from e
        raise SpecParseError(f"Unknown endomorphism '{node.kind}'", node.span)
