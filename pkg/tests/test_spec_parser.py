"""
Tests for the specification parser and the explicit-table format.
"""

import pytest

from morphic_analyser.utils.spec_parser import (
    SpecNode,
    SpecParseError,
    load_table,
    parse_poly,
    parse_spec,
    render_poly,
    render_spec,
)


class TestParseSpec:
    """Test cases for parse_spec."""

    def test_trivial_extension(self):
        node = parse_spec("TrivExt(Z(4), Reg(Z(4)))")
        assert node.kind == "TrivExt"
        assert node.args[0] == SpecNode("Z", (4,))
        assert node.args[1].sort == "module"

    def test_whitespace_insensitive(self):
        assert parse_spec("TrivExt(Prod(Z(2),Z(2)), Twist(Prod(Z(2),Z(2)), swap))") == parse_spec(
            "TrivExt( Prod( Z(2) , Z(2) ) , Twist(Prod(Z(2), Z(2)),swap) )"
        )

    def test_galois(self):
        node = parse_spec("GF(2, x^2+x+1)")
        assert node.args == (2, (1, 1, 1))

    def test_galois_not_prime(self):
        """Test that GF(4, ...) is rejected because 4 is not prime."""
        with pytest.raises(SpecParseError, match="prime"):
            parse_spec("GF(4, x^2+x+1)")

    def test_conj_matrix(self):
        node = parse_spec("Twist(Mat(2, Z(2)), conj([[1, 1], [0, 1]]))")
        assert node.args[1] == SpecNode("conj", (((1, 1), (0, 1)),))

    def test_image_list(self):
        node = parse_spec("Twist(Z(2), [0, 1])")
        assert node.args[1] == SpecNode("image", ((0, 1),))

    def test_quotients(self):
        assert parse_spec("Quot(Z(12), [4])").sort == "ring"
        assert parse_spec("Quot(Reg(Z(6)), [2])").sort == "module"

    def test_syntax_error_span(self):
        """Test that the span points at the offending token."""
        with pytest.raises(SpecParseError) as info:
            parse_spec("Z(4")
        assert info.value.span == (3, 3)

    def test_unknown_constructor(self):
        with pytest.raises(SpecParseError, match="Unknown constructor"):
            parse_spec("Ring(4)")

    def test_module_where_ring_expected(self):
        with pytest.raises(SpecParseError, match="Expected a ring"):
            parse_spec("TrivExt(Reg(Z(2)), Reg(Z(2)))")

    def test_trailing_input(self):
        with pytest.raises(SpecParseError, match="Trailing"):
            parse_spec("Z(4) Z(2)")

    @pytest.mark.parametrize(
        "text",
        [
            "TrivExt(Z(4), Reg(Z(4)))",
            "TrivExt(GF(2, x^2+x+1), Twist(GF(2, x^2+x+1), frobenius))",
            "TrivExt(Mat(2, Z(2)), Twist(Mat(2, Z(2)), conj([[1, 1], [0, 1]])))",
            "TrivExt(Z(6), Quot(Reg(Z(6)), [2]))",
            'TrivExt(Table("f2xy_square_zero"), Zero(Table("f2xy_square_zero")))',
        ],
    )
    def test_render_round_trip(self, text):
        node = parse_spec(text)
        assert parse_spec(render_spec(node)) == node


class TestPolynomials:
    """Test cases for polynomial parsing."""

    def test_parse_poly(self):
        assert parse_poly("x^3+x+1", 2) == [1, 0, 1, 1]
        assert parse_poly("2x^2 - 1", 3) == [2, 0, 2]
        assert parse_poly("x^2+1+1", 2) == [1, 0, 0]

    def test_leading_zero_stripped(self):
        assert parse_poly("3x^2+x", 3) == [1, 0]

    def test_bad_term(self):
        with pytest.raises(SpecParseError):
            parse_poly("y+1", 2)

    def test_render_poly(self):
        assert render_poly([2, 1, 1]) == "2x^2+x+1"
        assert parse_poly(render_poly([1, 0, 2]), 3) == [1, 0, 2]


class TestTables:
    """Test cases for the explicit-table format."""

    def test_bundled_table(self):
        add, mul = load_table("f2xy_square_zero")
        assert add.shape == mul.shape == (8, 8)
        assert mul[2, 2] == 0
        assert mul[3, 3] == 1

    def test_table_from_path(self, tmp_path):
        path = tmp_path / "z2.tbl"
        path.write_text("# Z/2\n2\n0 1\n1 0\n0 0\n0 1\n")
        add, mul = load_table(str(path))
        assert mul.tolist() == [[0, 0], [0, 1]]

    def test_malformed_table(self, tmp_path):
        path = tmp_path / "bad.tbl"
        path.write_text("2\n0 1 1 0\n")
        with pytest.raises(SpecParseError, match="entries"):
            load_table(str(path))

    def test_missing_table(self):
        with pytest.raises(SpecParseError, match="not found"):
            load_table("no_such_table_anywhere")
