"""
Smith normal form over Z and F_p[x], and diagonalization of square matrices
over R∝Q/R with certified invertible transformations.
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from morphic_analyser.config import Settings, get_settings
from morphic_analyser.models.matrices import BaseMatrix, ElementaryOp, Grid, TrivExtMatrix
from morphic_analyser.models.schemas import DiagonalizationSummary, PropertyReport
from morphic_analyser.models.torsion import (
    AnnihilatorDescriptor,
    EuclideanDomain,
    EuclideanElement,
    FractionModOne,
    QTrivExtElement,
)
from morphic_analyser.services.torsion_service import TorsionService
from morphic_analyser.utils.validators import TheoremViolationError


@dataclass
class SmithResult:
    """P·A·Q = D with P, Q unimodular; ops is the log that builds P (rows) and Q (cols)."""

    p: BaseMatrix
    d: BaseMatrix
    q: BaseMatrix
    ops: List[ElementaryOp] = field(default_factory=list)

    @property
    def invariant_factors(self) -> List[EuclideanElement]:
        return [x for x in self.d.diagonal() if not x.is_zero()]


@dataclass
class DiagonalizationResult:
    """U·B·V = D with U, V invertible over R∝Q/R."""

    u: TrivExtMatrix
    v: TrivExtMatrix
    d: TrivExtMatrix
    ops: List[ElementaryOp] = field(default_factory=list)
    verified: bool = False

    def replay_inverses(self) -> Tuple[TrivExtMatrix, TrivExtMatrix]:
        """U^-1 and V^-1 from the op log, inverse operations in reverse order."""
        identity = TrivExtMatrix.identity(self.u.domain, self.u.n)
        reverse = [op.inverse() for op in reversed(self.ops)]
        u_inverse = identity.replay([op for op in reverse if op.axis == "row"])
        v_inverse = identity.replay([op for op in reverse if op.axis == "col"])
        return u_inverse, v_inverse

    def summary(self) -> DiagonalizationSummary:
        return DiagonalizationSummary(
            size=self.d.n,
            d=self.d.to_json(),
            u=self.u.to_json(),
            v=self.v.to_json(),
            op_log=[op.to_json() for op in self.ops],
            verified=self.verified,
        )


@dataclass
class MatrixWitness:
    """Partner W of B (ann_l(B) = M·W and ann_l(W) = M·B in M = M_n(R∝Q/R))."""

    matrix: TrivExtMatrix
    partner: TrivExtMatrix
    diagonal_partner: TrivExtMatrix
    diagonalization: DiagonalizationResult
    samples: int


def _smallest(grid: Grid, start: int) -> Optional[Tuple[int, int]]:
    """Position of the smallest nonzero entry in the trailing block, ties by position."""
    best = None
    for i in range(start, len(grid)):
        for j in range(start, len(grid[0])):
            x = grid[i][j]
            if not x.is_zero() and (best is None or x.size < grid[best[0]][best[1]].size):
                best = (i, j)
    return best


class DiagonalService:
    """Service for Smith normal forms and trivial-extension diagonalization."""

    def __init__(self, settings: Optional[Settings] = None):
        """
        Initialize the diagonal service.

        Args:
            settings: Run configuration (if None, loads from environment)
        """
        self.settings = settings or get_settings()
        self.torsion = TorsionService(self.settings)

    # Smith normal form

    def _record(self, grid: Grid, log: List[ElementaryOp], op: ElementaryOp) -> None:
        op.apply(grid)
        log.append(op)

    def _smith_ops(self, grid: Grid, domain: EuclideanDomain) -> List[ElementaryOp]:
        """Reduce grid in place to Smith form and return the operations used."""
        log: List[ElementaryOp] = []
        rows, cols = len(grid), len(grid[0]) if grid else 0
        one = domain.one
        for t in range(min(rows, cols)):
            pivot = _smallest(grid, t)
            if pivot is None:
                break
            if pivot[0] != t:
                self._record(grid, log, ElementaryOp("swap", "row", t, pivot[0]))
            if pivot[1] != t:
                self._record(grid, log, ElementaryOp("swap", "col", t, pivot[1]))

            while True:
                changed = False
                for i in range(t + 1, rows):
                    if grid[i][t].is_zero():
                        continue
                    quotient = divmod(grid[i][t], grid[t][t])[0]
                    self._record(grid, log, ElementaryOp("addmul", "row", i, t, -quotient))
                    if not grid[i][t].is_zero():
                        self._record(grid, log, ElementaryOp("swap", "row", t, i))
                        changed = True
                for j in range(t + 1, cols):
                    if grid[t][j].is_zero():
                        continue
                    quotient = divmod(grid[t][j], grid[t][t])[0]
                    self._record(grid, log, ElementaryOp("addmul", "col", j, t, -quotient))
                    if not grid[t][j].is_zero():
                        self._record(grid, log, ElementaryOp("swap", "col", t, j))
                        changed = True
                if changed:
                    continue

                offender = next(
                    (
                        i
                        for i in range(t + 1, rows)
                        for j in range(t + 1, cols)
                        if not grid[t][t].divides(grid[i][j])
                    ),
                    None,
                )
                if offender is None:
                    break
                self._record(grid, log, ElementaryOp("addmul", "row", t, offender, one))

            unit = grid[t][t].canonical_unit()
            if unit != one:
                self._record(grid, log, ElementaryOp("scale", "row", t, factor=unit))
        return log

    def smith_normal_form(self, matrix: BaseMatrix) -> SmithResult:
        """
        P·A·Q = D with D diagonal, d_i | d_(i+1), entries normalized, nonzero entries first.

        Pivots are the smallest nonzero entries (absolute value or degree), ties by position.
        """
        grid = matrix.grid()
        ops = self._smith_ops(grid, matrix.domain)
        d = BaseMatrix.from_grid(matrix.domain, grid)
        p = BaseMatrix.identity(matrix.domain, matrix.rows).replay([op for op in ops if op.axis == "row"])
        q = BaseMatrix.identity(matrix.domain, matrix.cols).replay([op for op in ops if op.axis == "col"])
        logger.debug(f"SNF of a {matrix.rows}x{matrix.cols} matrix in {len(ops)} operations")
        return SmithResult(p=p, d=d, q=q, ops=ops)

    def determinant(self, matrix: BaseMatrix) -> EuclideanElement:
        """Laplace expansion along the first row."""
        n = matrix.rows
        if n == 0:
            return matrix.domain.one
        if n == 1:
            return matrix.entry(0, 0)
        total = matrix.domain.zero
        others = list(range(1, n))
        for j in range(n):
            entry = matrix.entry(0, j)
            if entry.is_zero():
                continue
            minor = self.determinant(matrix.submatrix(others, [c for c in range(n) if c != j]))
            term = entry * minor
            total = total + term if j % 2 == 0 else total - term
        return total

    def gcd_of_minors(self, matrix: BaseMatrix, k: int) -> EuclideanElement:
        """Normalized gcd of all k x k minors (zero when they all vanish)."""
        g = matrix.domain.zero
        for rows in combinations(range(matrix.rows), k):
            for cols in combinations(range(matrix.cols), k):
                g = g.gcd(self.determinant(matrix.submatrix(rows, cols)))
        return g.normalized()

    def verify_smith(self, matrix: BaseMatrix, result: SmithResult) -> PropertyReport:
        """PAQ = D, unimodular P and Q, the divisibility chain and the minors oracle."""
        report = PropertyReport(name="smith_normal_form")
        report.check(result.p @ matrix @ result.q == result.d, check="PAQ=D")
        report.check(result.d.is_diagonal(), check="diagonal")
        report.check(self.determinant(result.p).is_unit(), check="det P unit")
        report.check(self.determinant(result.q).is_unit(), check="det Q unit")

        diagonal = result.d.diagonal()
        report.check(all(x == x.normalized() for x in diagonal), check="normalized")
        for i in range(len(diagonal) - 1):
            report.check(diagonal[i].divides(diagonal[i + 1]), check="chain", index=i)

        running = matrix.domain.one
        for k in range(1, len(diagonal) + 1):
            running = running * diagonal[k - 1]
            report.check(
                running.normalized() == self.gcd_of_minors(matrix, k),
                check="gcd of minors",
                k=k,
                product=running.to_json(),
            )
        return report

    # Trivial extension

    def generator_of_fraction_block(self, block: Sequence[Sequence[FractionModOne]]) -> Tuple[FractionModOne, BaseMatrix]:
        """
        A single n = 1/L (L the lcm of the denominators) with every entry r_ij·n.

        Returns:
            Tuple[FractionModOne, BaseMatrix]: n and the coefficients r_ij
        """
        domain = block[0][0].domain
        lcm = domain.one
        for row in block:
            for x in row:
                lcm = lcm.lcm(x.q)
        generator = FractionModOne.reduce(domain.one, lcm)
        coefficients = [[x.p * lcm.exact_div(x.q) for x in row] for row in block]
        return generator, BaseMatrix.from_grid(domain, coefficients)

    def diagonalize_trivext(self, matrix: TrivExtMatrix) -> DiagonalizationResult:
        """
        U·B·V = D for square B over R∝Q/R.

        1. Smith form of the ring part B1, applied to all of B.
        2. For each nonzero d_i: clear row i, then column i, with x solving d_i·x = m.
        3. The trailing block (ring part zero) is (0, N); write N = C·(1/L) and take the
           Smith form of C.

        Raises:
            TheoremViolationError: If the result fails exact verification
        """
        domain, n = matrix.domain, matrix.n
        grid = matrix.grid()
        log: List[ElementaryOp] = []

        ring_grid = matrix.ring_part().grid()
        for op in self._smith_ops(ring_grid, domain):
            self._record(grid, log, op.lift())
        rank = sum(1 for i in range(n) if not grid[i][i].r.is_zero())

        zero = domain.zero
        for i in range(rank):
            d = grid[i][i].r
            for j in range(n):
                if j != i and not grid[i][j].is_zero():
                    x = self.torsion.divide(grid[i][j].m, d)
                    self._record(grid, log, ElementaryOp("addmul", "col", j, i, QTrivExtElement(zero, -x)))
            for j in range(n):
                if j != i and not grid[j][i].is_zero():
                    x = self.torsion.divide(grid[j][i].m, d)
                    self._record(grid, log, ElementaryOp("addmul", "row", j, i, QTrivExtElement(zero, -x)))

        if rank < n:
            block = [[grid[i][j].m for j in range(rank, n)] for i in range(rank, n)]
            generator, coefficients = self.generator_of_fraction_block(block)
            if not generator.is_zero():
                for op in self._smith_ops(coefficients.grid(), domain):
                    self._record(grid, log, op.shifted(rank).lift())

        identity = TrivExtMatrix.identity(domain, n)
        result = DiagonalizationResult(
            u=identity.replay([op for op in log if op.axis == "row"]),
            v=identity.replay([op for op in log if op.axis == "col"]),
            d=TrivExtMatrix.from_grid(domain, grid),
            ops=log,
        )
        report = self.verify_diagonalization(matrix, result)
        if not report.passed:
            logger.error(f"Diagonalization failed verification: {report.failures}")
            raise TheoremViolationError(f"Diagonalization not verified: {report.failures}")
        result.verified = True
        return result

    def verify_diagonalization(self, matrix: TrivExtMatrix, result: DiagonalizationResult) -> PropertyReport:
        """UBV = D, D diagonal with a ring-part chain, and U, V invertible with replayed inverses."""
        report = PropertyReport(name="diagonalization")
        report.check(result.u @ matrix @ result.v == result.d, check="UBV=D")
        report.check(result.d.is_diagonal(), check="diagonal")
        ring_diagonal = [x.r for x in result.d.diagonal()]
        for i in range(len(ring_diagonal) - 1):
            report.check(ring_diagonal[i].divides(ring_diagonal[i + 1]), check="chain", index=i)

        # The module parts form a square-zero ideal, so a unit determinant of the ring part suffices.
        for name, m in (("U", result.u), ("V", result.v)):
            report.check(self.determinant(m.ring_part()).is_unit(), check=f"det {name} unit")
        identity = TrivExtMatrix.identity(matrix.domain, matrix.n)
        u_inverse, v_inverse = result.replay_inverses()
        report.check(result.u @ u_inverse == identity, check="U inverse")
        report.check(v_inverse @ result.v == identity, check="V inverse")
        return report

    def matrix_morphic_witness(
        self, matrix: TrivExtMatrix, samples: int = 20, seed: Optional[int] = None, bound: int = 50
    ) -> MatrixWitness:
        """
        W = V·W'·U with W' the entrywise partner of D = U·B·V.

        Certified on seeded samples in both directions:
        X·B = 0 iff X·U^-1 has column j in S·w'_j; X·W = 0 iff X·V has column j in S·d_j.

        Raises:
            TheoremViolationError: If certification fails
        """
        domain, n = matrix.domain, matrix.n
        result = self.diagonalize_trivext(matrix)
        diagonal = result.d.diagonal()
        partners = [self.torsion.certify_partner(x) for x in diagonal]
        diagonal_partner = TrivExtMatrix.diagonal_matrix(domain, partners)
        partner = result.v @ diagonal_partner @ result.u
        u_inverse, _ = result.replay_inverses()

        left_shapes = [self.torsion.principal_descriptor(w) for w in partners]
        right_shapes = [self.torsion.principal_descriptor(x) for x in diagonal]
        rng = np.random.default_rng(self.settings.seed if seed is None else seed)

        def members(x: TrivExtMatrix, shapes: List[AnnihilatorDescriptor]) -> bool:
            return all(shapes[j].contains(x.entry(i, j)) for i in range(n) for j in range(n))

        checked = 0
        for k in range(samples):
            y = self._random_matrix(domain, n, rng, bound)
            candidates = (
                ("ann(B)=MW", y @ partner, matrix, lambda x: members(x @ u_inverse, left_shapes)),
                ("ann(B)=MW", y, matrix, lambda x: members(x @ u_inverse, left_shapes)),
                ("ann(W)=MB", y @ matrix, partner, lambda x: members(x @ result.v, right_shapes)),
                ("ann(W)=MB", y, partner, lambda x: members(x @ result.v, right_shapes)),
            )
            for name, x, target, membership in candidates:
                checked += 1
                annihilates = (x @ target) == TrivExtMatrix.zeros(domain, n)
                if annihilates != membership(x):
                    logger.error(f"Matrix witness certification failed on {name}")
                    raise TheoremViolationError(f"Matrix partner not certified ({name}) on sample {k}")
        logger.info(f"Matrix witness for a {n}x{n} matrix certified on {checked} samples")
        return MatrixWitness(
            matrix=matrix,
            partner=partner,
            diagonal_partner=diagonal_partner,
            diagonalization=result,
            samples=checked,
        )

    # Random inputs

    def _random_matrix(self, domain: EuclideanDomain, n: int, rng: np.random.Generator, bound: int) -> TrivExtMatrix:
        return TrivExtMatrix.from_grid(
            domain,
            [[self.torsion.random_element(domain, rng, bound) for _ in range(n)] for _ in range(n)],
        )

    def random_base_matrix(self, domain: EuclideanDomain, rows: int, cols: int, rng: np.random.Generator, bound: int) -> BaseMatrix:
        return BaseMatrix.from_grid(domain, [[domain.random_element(rng, bound) for _ in range(cols)] for _ in range(rows)])

    def random_trivext_matrix(self, domain: EuclideanDomain, n: int, rng: np.random.Generator, bound: int) -> TrivExtMatrix:
        return self._random_matrix(domain, n, rng, bound)

    # Suites

    def verify_smith_suite(self, count: int, max_size: int = 4, entry_bound: int = 100, seed: Optional[int] = None) -> PropertyReport:
        """Seeded random integer matrices of size up to max_size."""
        domain = self.torsion.domain("Z")
        rng = np.random.default_rng(self.settings.seed if seed is None else seed)
        report = PropertyReport(name="smith_suite", sampled=True)
        for _ in range(count):
            rows, cols = (int(v) for v in rng.integers(1, max_size + 1, size=2))
            matrix = self.random_base_matrix(domain, rows, cols, rng, entry_bound)
            outcome = self.verify_smith(matrix, self.smith_normal_form(matrix))
            report.check(outcome.passed, matrix=matrix.to_json(), failures=outcome.failures)
        logger.info(f"SNF suite: {report.checked} matrices, passed={report.passed}")
        return report

    def verify_diagonalization_suite(
        self, count: int, witness_count: int, max_size: int = 4, bound: int = 50, seed: Optional[int] = None
    ) -> PropertyReport:
        """Seeded random matrices over Z∝Q/Z: diagonalization on all, witnesses on the first witness_count."""
        domain = self.torsion.domain("Z")
        rng = np.random.default_rng(self.settings.seed if seed is None else seed)
        report = PropertyReport(name="diagonalization_suite", sampled=True)
        for k in range(count):
            n = int(rng.integers(1, max_size + 1))
            matrix = self.random_trivext_matrix(domain, n, rng, bound)
            try:
                if k < witness_count:
                    self.matrix_morphic_witness(matrix, samples=4, seed=int(rng.integers(2**31)), bound=bound)
                else:
                    self.diagonalize_trivext(matrix)
                report.checked += 1
            except TheoremViolationError as e:
                report.checked += 1
                report.fail(matrix=matrix.to_json(), error=str(e))
        logger.info(f"Diagonalization suite: {report.checked} matrices, passed={report.passed}")
        return report
