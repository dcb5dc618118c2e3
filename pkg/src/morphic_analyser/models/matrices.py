"""
Matrices over a Euclidean domain and over R∝Q/R, with replayable
elementary row and column operations.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Literal, Sequence, Tuple

from morphic_analyser.models.torsion import (
    EuclideanDomain,
    EuclideanElement,
    QTrivExtElement,
)
from morphic_analyser.utils.validators import PreconditionError

Grid = List[List[Any]]


def _product(left: Sequence[Sequence[Any]], right: Sequence[Sequence[Any]], zero: Any) -> Grid:
    if len(left[0]) != len(right):
        raise PreconditionError(f"Cannot multiply {len(left)}x{len(left[0])} by {len(right)}x{len(right[0])}")
    out: Grid = []
    for row in left:
        line = []
        for j in range(len(right[0])):
            total = zero
            for k, entry in enumerate(row):
                total = total + entry * right[k][j]
            line.append(total)
        out.append(line)
    return out


@dataclass(frozen=True)
class ElementaryOp:
    """
    One elementary operation, applied in place to a grid.

    swap:   exchange lines i and j
    addmul: row_i += factor·row_j, or col_i += col_j·factor
    scale:  row_i = factor·row_i, or col_i = col_i·factor (factor a unit)
    """

    kind: Literal["swap", "addmul", "scale"]
    axis: Literal["row", "col"]
    i: int
    j: int = -1
    factor: Any = None

    def apply(self, grid: Grid) -> None:
        if self.axis == "row":
            self._apply_rows(grid)
        else:
            self._apply_cols(grid)

    def _apply_rows(self, grid: Grid) -> None:
        i, j = self.i, self.j
        if self.kind == "swap":
            grid[i], grid[j] = grid[j], grid[i]
        elif self.kind == "addmul":
            grid[i] = [a + self.factor * b for a, b in zip(grid[i], grid[j])]
        else:
            grid[i] = [self.factor * a for a in grid[i]]

    def _apply_cols(self, grid: Grid) -> None:
        i, j = self.i, self.j
        for row in grid:
            if self.kind == "swap":
                row[i], row[j] = row[j], row[i]
            elif self.kind == "addmul":
                row[i] = row[i] + row[j] * self.factor
            else:
                row[i] = row[i] * self.factor

    def inverse(self) -> "ElementaryOp":
        if self.kind == "swap":
            return self
        if self.kind == "addmul":
            return ElementaryOp("addmul", self.axis, self.i, self.j, -self.factor)
        return ElementaryOp("scale", self.axis, self.i, self.j, self.factor.unit_inverse())

    def lift(self) -> "ElementaryOp":
        """The same operation with a base-domain factor c read as (c, 0)."""
        if isinstance(self.factor, EuclideanElement):
            return ElementaryOp(self.kind, self.axis, self.i, self.j, QTrivExtElement.lift(self.factor))
        return self

    def shifted(self, offset: int) -> "ElementaryOp":
        j = self.j + offset if self.j >= 0 else self.j
        return ElementaryOp(self.kind, self.axis, self.i + offset, j, self.factor)

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"kind": self.kind, "axis": self.axis, "i": self.i}
        if self.j >= 0:
            out["j"] = self.j
        if self.factor is not None:
            out["factor"] = self.factor.to_json()
        return out


class _Matrix:
    """Shared behaviour of immutable entry grids."""

    entries: Tuple[Tuple[Any, ...], ...]

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def grid(self) -> Grid:
        """Mutable copy of the entries."""
        return [list(row) for row in self.entries]

    def entry(self, i: int, j: int) -> Any:
        return self.entries[i][j]

    def diagonal(self) -> List[Any]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]

    def is_diagonal(self) -> bool:
        return all(
            self.entries[i][j].is_zero()
            for i in range(self.rows)
            for j in range(self.cols)
            if i != j
        )

    def __eq__(self, other: object) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def to_json(self) -> List[List[Any]]:
        return [[x.to_json() for x in row] for row in self.entries]


@dataclass(frozen=True, eq=False)
class BaseMatrix(_Matrix):
    """A rectangular matrix over Z or F_p[x]."""

    domain: EuclideanDomain
    entries: Tuple[Tuple[EuclideanElement, ...], ...]

    def __post_init__(self):
        widths = {len(row) for row in self.entries}
        if len(widths) > 1:
            raise PreconditionError("Matrix rows have different lengths")

    @classmethod
    def from_grid(cls, domain: EuclideanDomain, grid: Sequence[Sequence[EuclideanElement]]) -> "BaseMatrix":
        return cls(domain, tuple(tuple(row) for row in grid))

    @classmethod
    def from_values(cls, domain: EuclideanDomain, values: Sequence[Sequence[Any]]) -> "BaseMatrix":
        return cls.from_grid(domain, [[domain.element(v) for v in row] for row in values])

    @classmethod
    def identity(cls, domain: EuclideanDomain, n: int) -> "BaseMatrix":
        return cls.from_grid(domain, [[domain.one if i == j else domain.zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, domain: EuclideanDomain, rows: int, cols: int) -> "BaseMatrix":
        return cls.from_grid(domain, [[domain.zero] * cols for _ in range(rows)])

    def __matmul__(self, other: "BaseMatrix") -> "BaseMatrix":
        return BaseMatrix.from_grid(self.domain, _product(self.entries, other.entries, self.domain.zero))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "BaseMatrix":
        return BaseMatrix.from_grid(self.domain, [[self.entries[i][j] for j in cols] for i in rows])

    def replay(self, ops: Sequence[ElementaryOp]) -> "BaseMatrix":
        grid = self.grid()
        for op in ops:
            op.apply(grid)
        return BaseMatrix.from_grid(self.domain, grid)


@dataclass(frozen=True, eq=False)
class TrivExtMatrix(_Matrix):
    """A square matrix over R∝Q/R, viewed as (B1, B2) with B1 the ring parts."""

    domain: EuclideanDomain
    entries: Tuple[Tuple[QTrivExtElement, ...], ...]

    def __post_init__(self):
        if any(len(row) != len(self.entries) for row in self.entries):
            raise PreconditionError("Matrices over the trivial extension must be square")

    @classmethod
    def from_grid(cls, domain: EuclideanDomain, grid: Sequence[Sequence[QTrivExtElement]]) -> "TrivExtMatrix":
        return cls(domain, tuple(tuple(row) for row in grid))

    @classmethod
    def identity(cls, domain: EuclideanDomain, n: int) -> "TrivExtMatrix":
        one, zero = QTrivExtElement.one(domain), QTrivExtElement.zero(domain)
        return cls.from_grid(domain, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, domain: EuclideanDomain, n: int) -> "TrivExtMatrix":
        zero = QTrivExtElement.zero(domain)
        return cls.from_grid(domain, [[zero] * n for _ in range(n)])

    @classmethod
    def diagonal_matrix(cls, domain: EuclideanDomain, entries: Sequence[QTrivExtElement]) -> "TrivExtMatrix":
        zero = QTrivExtElement.zero(domain)
        n = len(entries)
        return cls.from_grid(domain, [[entries[i] if i == j else zero for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return self.rows

    def ring_part(self) -> BaseMatrix:
        return BaseMatrix.from_grid(self.domain, [[x.r for x in row] for row in self.entries])

    def __matmul__(self, other: "TrivExtMatrix") -> "TrivExtMatrix":
        return TrivExtMatrix.from_grid(self.domain, _product(self.entries, other.entries, QTrivExtElement.zero(self.domain)))

    def replay(self, ops: Sequence[ElementaryOp]) -> "TrivExtMatrix":
        grid = self.grid()
        for op in ops:
            op.lift().apply(grid)
        return TrivExtMatrix.from_grid(self.domain, grid)
