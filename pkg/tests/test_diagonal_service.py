"""
Tests for Smith normal forms and diagonalization over R∝Q/R.
"""

import pytest

from morphic_analyser.models.matrices import BaseMatrix, TrivExtMatrix
from morphic_analyser.services.diagonal_service import DiagonalService
from morphic_analyser.utils.validators import PreconditionError


@pytest.fixture
def diagonal(settings):
    return DiagonalService(settings)


@pytest.fixture
def zz(diagonal):
    return diagonal.torsion.domain("Z")


def trivext(diagonal, domain, rows):
    """Matrix over R∝Q/R from rows of "r,p/q" strings."""
    return TrivExtMatrix.from_grid(domain, [[diagonal.torsion.qtriv_element(domain, x) for x in row] for row in rows])


class TestSmithNormalForm:
    """Test cases for smith_normal_form."""

    def test_two_by_two(self, diagonal, zz):
        """Test [[2, 4], [6, 8]] reduces to diag(2, 4)."""
        matrix = BaseMatrix.from_values(zz, [[2, 4], [6, 8]])
        result = diagonal.smith_normal_form(matrix)
        assert result.d == BaseMatrix.from_values(zz, [[2, 0], [0, 4]])
        assert [x.to_json() for x in result.invariant_factors] == [2, 4]
        assert result.p @ matrix @ result.q == result.d
        assert diagonal.verify_smith(matrix, result).passed

    def test_rectangular(self, diagonal, zz):
        matrix = BaseMatrix.from_values(zz, [[4, 6]])
        result = diagonal.smith_normal_form(matrix)
        assert result.d.to_json() == [[2, 0]]
        assert diagonal.verify_smith(matrix, result).passed

    def test_zero_matrix(self, diagonal, zz):
        matrix = BaseMatrix.zeros(zz, 2, 3)
        result = diagonal.smith_normal_form(matrix)
        assert result.invariant_factors == []
        assert result.ops == []

    def test_polynomial_entries(self, diagonal):
        """Test diag(x^2, x) over F2[x] is reordered to diag(x, x^2)."""
        f2x = diagonal.torsion.domain("GF(2)")
        matrix = BaseMatrix.from_values(f2x, [[[1, 0, 0], [0]], [[0], [1, 0]]])
        result = diagonal.smith_normal_form(matrix)
        assert result.d.to_json() == [[[1, 0], []], [[], [1, 0, 0]]]
        assert diagonal.verify_smith(matrix, result).passed

    def test_op_log_replays(self, diagonal, zz):
        matrix = BaseMatrix.from_values(zz, [[3, 5, 7], [2, 4, 6]])
        result = diagonal.smith_normal_form(matrix)
        assert result.ops
        assert all(op.to_json()["kind"] in ("swap", "addmul", "scale") for op in result.ops)
        assert diagonal.verify_smith(matrix, result).passed

    def test_minors(self, diagonal, zz):
        matrix = BaseMatrix.from_values(zz, [[2, 4], [6, 8]])
        assert diagonal.determinant(matrix).to_json() == -8
        assert diagonal.gcd_of_minors(matrix, 1).to_json() == 2
        assert diagonal.gcd_of_minors(matrix, 2).to_json() == 8

    def test_ragged_rows(self, zz):
        with pytest.raises(PreconditionError):
            BaseMatrix.from_values(zz, [[1, 2], [3]])


class TestDiagonalization:
    """Test cases for diagonalize_trivext and the matrix witness."""

    def test_example(self, diagonal, zz):
        """Test B = [[(2,0), (0,1/2)], [(0,0), (0,1/3)]] gives D = diag((2,0), (0,1/3))."""
        matrix = trivext(diagonal, zz, [["2,0", "0,1/2"], ["0,0", "0,1/3"]])
        result = diagonal.diagonalize_trivext(matrix)
        assert result.verified
        assert result.d.to_json() == [
            [{"r": 2, "m": "0/1"}, {"r": 0, "m": "0/1"}],
            [{"r": 0, "m": "0/1"}, {"r": 0, "m": "1/3"}],
        ]
        assert result.u @ matrix @ result.v == result.d

    def test_replayed_inverses(self, diagonal, zz):
        matrix = trivext(diagonal, zz, [["4,1/3", "6,0"], ["2,1/5", "0,2/7"]])
        result = diagonal.diagonalize_trivext(matrix)
        u_inverse, v_inverse = result.replay_inverses()
        identity = TrivExtMatrix.identity(zz, 2)
        assert result.u @ u_inverse == identity
        assert v_inverse @ result.v == identity
        assert diagonal.verify_diagonalization(matrix, result).passed

    def test_summary(self, diagonal, zz):
        matrix = trivext(diagonal, zz, [["2,0", "0,1/2"], ["0,0", "0,1/3"]])
        summary = diagonal.diagonalize_trivext(matrix).summary()
        assert summary.size == 2
        assert summary.verified
        assert summary.op_log[0]["kind"] == "addmul"

    def test_module_only_matrix(self, diagonal, zz):
        """Test that a pure-torsion block is diagonalized through its common denominator."""
        matrix = trivext(diagonal, zz, [["0,1/2", "0,1/3"], ["0,1/6", "0,0"]])
        result = diagonal.diagonalize_trivext(matrix)
        assert result.d.is_diagonal()
        assert all(x.r.is_zero() for x in result.d.diagonal())

    def test_zero_matrix(self, diagonal, zz):
        result = diagonal.diagonalize_trivext(TrivExtMatrix.zeros(zz, 2))
        assert result.d == TrivExtMatrix.zeros(zz, 2)
        assert result.ops == []

    def test_not_square(self, diagonal, zz):
        with pytest.raises(PreconditionError, match="square"):
            trivext(diagonal, zz, [["1,0", "0,0"]])

    def test_generator_of_fraction_block(self, diagonal, zz):
        """Test 1/15, 1/10, 1/6 and 0 share the generator 1/30."""
        block = [
            [diagonal.torsion.fraction(zz, "1/15"), diagonal.torsion.fraction(zz, "1/10")],
            [diagonal.torsion.fraction(zz, "1/6"), diagonal.torsion.fraction(zz, "0")],
        ]
        generator, coefficients = diagonal.generator_of_fraction_block(block)
        assert generator.to_json() == "1/30"
        assert coefficients.to_json() == [[2, 3], [5, 0]]

    def test_matrix_witness(self, diagonal, zz):
        """Test W = V·W'·U annihilates B on both sides."""
        matrix = trivext(diagonal, zz, [["2,0", "0,1/2"], ["0,0", "0,1/3"]])
        witness = diagonal.matrix_morphic_witness(matrix, samples=10, seed=1, bound=20)
        assert [x.to_json() for x in witness.diagonal_partner.diagonal()] == [
            {"r": 0, "m": "1/2"},
            {"r": 3, "m": "0/1"},
        ]
        zero = TrivExtMatrix.zeros(zz, 2)
        assert witness.partner @ matrix == zero
        assert matrix @ witness.partner == zero
        assert witness.samples == 40


class TestSuites:
    """Test cases for the seeded random suites."""

    def test_smith_suite(self, diagonal):
        report = diagonal.verify_smith_suite(count=20, max_size=3, entry_bound=20)
        assert report.passed, report.failures
        assert report.checked == 20

    def test_diagonalization_suite(self, diagonal):
        report = diagonal.verify_diagonalization_suite(count=8, witness_count=2, max_size=3, bound=20)
        assert report.passed, report.failures
        assert report.checked == 8
