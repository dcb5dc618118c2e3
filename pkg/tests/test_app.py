"""
Tests for the command-line surface: commands, output and exit codes.
"""

import json

import pytest

from morphic_analyser import app
from morphic_analyser.models.torsion import QTrivExtElement
from morphic_analyser.services.torsion_service import TorsionService
from morphic_analyser.utils.spec_parser import SpecParseError


def run(capsys, *argv):
    """Run main and return (exit code, stdout)."""
    code = app.main(["--seed", "7", *argv])
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


class TestCommands:
    """Test cases for successful commands."""

    def test_analyze(self, capsys):
        code, report = run_json(capsys, "--command", "analyze", "--spec", "Z( 4 )")
        assert code == app.EXIT_OK
        assert report["spec"] == "Z(4)"
        assert report["seed"] == 7
        assert report["result"]["morphic"] is True
        assert report["result"]["unit_regular"] is False

    def test_classify(self, capsys):
        code, report = run_json(capsys, "--command", "classify", "--spec", "TrivExt(Z(4), Reg(Z(4)))")
        assert code == app.EXIT_OK
        assert report["result"]["brute_force_morphic"] is False

    def test_witness(self, capsys):
        code, report = run_json(capsys, "--command", "witness", "--spec", "Z(4)", "--element", "2")
        assert code == app.EXIT_OK
        assert report["result"]["left_morphic"]["partner"] == 2
        assert report["result"]["regularity"]["status"] == "not_regular"

    def test_witness_in_extension(self, capsys):
        """Test that (0,2) in Z4∝Z4 has no witness and is rendered as a pair."""
        code, report = run_json(capsys, "--command", "witness", "--spec", "TrivExt(Z(4), Reg(Z(4)))", "--element", "2")
        assert code == app.EXIT_OK
        assert report["result"]["left_morphic"] is None
        assert "rendered" in report["result"]

    def test_lattice(self, capsys):
        code, report = run_json(capsys, "--command", "lattice", "--spec", "TrivExt(Prod(Z(2), Z(2)), Reg(Prod(Z(2), Z(2))))")
        assert code == app.EXIT_OK
        assert len(report["result"]["entries"]) == 4

    def test_qtriv_element(self, capsys):
        code, report = run_json(capsys, "--command", "qtriv", "--domain", "Z", "--element", "0,1/2")
        assert code == app.EXIT_OK
        assert report["result"]["partner"] == {"r": 2, "m": "0/1"}
        assert report["spec"] is None

    def test_qtriv_sampled(self, capsys):
        code, report = run_json(capsys, "--command", "qtriv", "--domain", "GF(2)", "--bound", "3")
        assert code == app.EXIT_OK
        assert report["result"]["name"] == "qtriv_partners"

    def test_catalog(self, capsys):
        code, report = run_json(capsys, "--command", "catalog")
        assert code == app.EXIT_OK
        specs = {entry["spec"] for entry in report["result"]["entries"]}
        assert "TrivExt(Z(4), Reg(Z(4)))" in specs

    def test_verify(self, capsys):
        """Test that the scaled suite runs every check, the domain conditions included."""
        code, report = run_json(capsys, "--command", "verify", "--bound", "3")
        assert code == app.EXIT_OK
        assert report["passed"] is True
        assert report["result"]["reports"]["domain_conditions_Z"]["checked"] > 0
        assert "twisted_self_extension" in report["result"]["reports"]

    def test_snf(self, capsys, tmp_path):
        job = tmp_path / "snf.json"
        job.write_text(json.dumps({"domain": "Z", "matrix": [[2, 4], [6, 8]]}))
        code, report = run_json(capsys, "--command", "snf", "--matrix-file", str(job))
        assert code == app.EXIT_OK
        assert report["result"]["invariant_factors"] == [2, 4]
        assert report["result"]["d"] == [[2, 0], [0, 4]]

    def test_diag(self, capsys, tmp_path):
        job = tmp_path / "diag.json"
        job.write_text(json.dumps([["2,0", "0,1/2"], [{"r": 0, "m": "0"}, "0,1/3"]]))
        code, report = run_json(capsys, "--command", "diag", "--matrix-file", str(job))
        assert code == app.EXIT_OK
        assert report["result"]["diagonalization"]["verified"] is True
        assert report["result"]["diagonal_partner"][1][1] == {"r": 3, "m": "0/1"}


class TestOutput:
    """Test cases for output formats and determinism."""

    def test_json_is_deterministic(self, capsys):
        argv = ("--command", "analyze", "--spec", "TrivExt(Z(2), Reg(Z(2)))")
        first = run(capsys, *argv)
        second = run(capsys, *argv)
        assert first == second

    def test_text_format(self, capsys):
        code, out = run(capsys, "--command", "analyze", "--spec", "Z(6)", "--format", "text")
        assert code == app.EXIT_OK
        assert out.startswith("command: analyze")
        assert "  morphic: True" in out

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out = run(capsys, "--command", "analyze", "--spec", "Z(3)", "--out", str(target))
        assert code == app.EXIT_OK
        assert out == ""
        assert json.loads(target.read_text())["command"] == "analyze"


class TestExitCodes:
    """Test cases for error handling and exit codes."""

    def test_parse_error(self, capsys):
        code, out = run(capsys, "--command", "analyze", "--spec", "Z(4")
        assert code == app.EXIT_PARSE
        assert out == ""

    def test_missing_spec(self, capsys):
        assert run(capsys, "--command", "analyze")[0] == app.EXIT_PARSE

    def test_semantic_error(self, capsys):
        assert run(capsys, "--command", "analyze", "--spec", "Twist(Z(4), frobenius)")[0] == app.EXIT_PARSE

    def test_witness_element_out_of_range(self, capsys):
        assert run(capsys, "--command", "witness", "--spec", "Z(4)", "--element", "9")[0] == app.EXIT_PARSE

    def test_bad_domain(self, capsys):
        assert run(capsys, "--command", "qtriv", "--domain", "GF(6)", "--element", "1,0")[0] == app.EXIT_PARSE

    def test_missing_matrix_file(self, capsys, tmp_path):
        code, _ = run(capsys, "--command", "snf", "--matrix-file", str(tmp_path / "absent.json"))
        assert code == app.EXIT_PARSE

    def test_bad_caps(self, capsys):
        assert run(capsys, "--caps", "colour=3", "--command", "catalog")[0] == app.EXIT_PARSE
        assert run(capsys, "--caps", "order_cap=0", "--command", "catalog")[0] == app.EXIT_PARSE

    def test_cap_exceeded(self, capsys):
        code, out = run(capsys, "--caps", "order_cap=100", "--command", "analyze", "--spec", "Mat(2, Z(4))")
        assert code == app.EXIT_CAP
        assert out == ""

    def test_failed_report(self, capsys, monkeypatch):
        """Test that a wrong partner is printed and exits with 1."""
        monkeypatch.setattr(TorsionService, "morphic_partner", lambda self, e: QTrivExtElement.lift(e.domain.element(3)))
        code, out = run(capsys, "--command", "qtriv", "--element", "0,1/2")
        assert code == app.EXIT_FAILED
        assert json.loads(out)["passed"] is False


class TestHelpers:
    """Test cases for caps and matrix-file parsing."""

    def test_parse_caps(self):
        assert app.parse_caps("order_cap=100") == {"order_cap": 100}
        assert app.parse_caps("full_scan_cap=8,sample_count=50") == {"full_scan_cap": 8, "sample_count": 50}
        assert app.parse_caps("") == {}

    def test_parse_caps_rejects_non_integer(self):
        with pytest.raises(SpecParseError, match="integer"):
            app.parse_caps("order_cap=big")

    def test_load_matrix_file(self, tmp_path):
        path = tmp_path / "job.json"
        path.write_text(json.dumps({"domain": "GF(2)", "matrix": [["x", "1"]]}))
        assert app.load_matrix_file(str(path)) == ("GF(2)", [["x", "1"]])

    def test_load_matrix_file_rejects_empty(self, tmp_path):
        path = tmp_path / "job.json"
        path.write_text(json.dumps({"matrix": []}))
        with pytest.raises(SpecParseError):
            app.load_matrix_file(str(path))
