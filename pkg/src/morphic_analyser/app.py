"""
Command-line entry point of the morphic analyser.

Usage:
    python src/morphic_analyser/app.py --command analyze --spec "Z(4)"
    python src/morphic_analyser/app.py --command classify --spec "TrivExt(Z(4), Reg(Z(4)))"
    python src/morphic_analyser/app.py --command qtriv --domain Z --element "0,1/2"
    python src/morphic_analyser/app.py --command diag --matrix-file job.json
    python src/morphic_analyser/app.py --command verify
"""

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from loguru import logger
from pydantic import ValidationError as SettingsError

CURRENT_DIR = os.path.dirname(os.path.abspath(__file__))   # .../src/morphic_analyser
SRC_DIR = os.path.dirname(CURRENT_DIR)                     # .../src

if SRC_DIR not in sys.path:
    sys.path.append(SRC_DIR)

from morphic_analyser.config import Settings, load_settings
from morphic_analyser.models.matrices import BaseMatrix, TrivExtMatrix
from morphic_analyser.models.schemas import CommandReport
from morphic_analyser.models.torsion import EuclideanDomain, QTrivExtElement
from morphic_analyser.services.catalog_service import CatalogService
from morphic_analyser.services.diagonal_service import DiagonalService
from morphic_analyser.services.structure_service import StructureService
from morphic_analyser.services.verification_service import SuiteSizes, VerificationService
from morphic_analyser.utils.spec_parser import SpecParseError, parse_spec, render_spec
from morphic_analyser.utils.validators import (
    CapExceededError,
    PreconditionError,
    TheoremViolationError,
    ValidationError,
)

COMMANDS = ("analyze", "classify", "witness", "lattice", "qtriv", "snf", "diag", "verify", "catalog")
CAP_KEYS = ("order_cap", "full_scan_cap", "sample_count", "denominator_bound", "degree_bound", "axiom_exhaustive_cap")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_CAP = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="morphic-analyser",
        description="Morphic and quasi-morphic analysis of finite rings and trivial extensions",
    )
    parser.add_argument("--command", choices=COMMANDS, default="analyze")
    parser.add_argument("--spec", help='Ring or extension specification, e.g. "TrivExt(Z(4), Reg(Z(4)))"')
    parser.add_argument("--seed", type=int, default=None, help="Master seed for every sampled check")
    parser.add_argument("--caps", default="", help="key=value[,key=value] over " + ", ".join(CAP_KEYS))
    parser.add_argument("--format", dest="output_format", choices=("text", "json"), default=None)
    parser.add_argument("--matrix-file", help="JSON matrix job for snf and diag")
    parser.add_argument("--out", help="Write the report to this file instead of stdout")
    parser.add_argument("--element", help="Element index (witness) or 'r,p/q' (qtriv)")
    parser.add_argument("--domain", default="Z", help="Base domain for qtriv: Z or GF(p)")
    parser.add_argument("--bound", type=int, default=None, help="Sample bound for qtriv and verify")
    parser.add_argument("--log-level", default=None)
    return parser


def parse_caps(text: str) -> Dict[str, int]:
    """
    Parse --caps into settings overrides.

    Raises:
        SpecParseError: On an unknown key or a non-integer value
    """
    caps: Dict[str, int] = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in CAP_KEYS:
            raise SpecParseError(f"Unknown cap '{key}' (expected one of {', '.join(CAP_KEYS)})")
        try:
            caps[key] = int(value)
        except ValueError as e:
            raise SpecParseError(f"Cap '{key}' needs an integer value, got '{value}'") from e
    return caps


def configure_logging(level: str) -> None:
    """Route all logging to stderr; stdout carries only the report."""
    logger.remove()
    logger.add(sys.stderr, level=level.upper())


# Commands


class CommandRunner:
    """Runs one CLI command against a fixed configuration."""

    def __init__(self, settings: Settings):
        self.settings = settings
        self.catalog = CatalogService(settings)
        self.structures = StructureService(settings)
        self.morphic = self.structures.morphic
        self.diagonal = DiagonalService(settings)
        self.torsion = self.diagonal.torsion

    def run(self, command: str, args: argparse.Namespace) -> CommandReport:
        handler = getattr(self, f"command_{command}")
        passed, result = handler(args)
        spec = render_spec(parse_spec(args.spec)) if args.spec else None
        return CommandReport(command=command, spec=spec, seed=self.settings.seed, passed=passed, result=result)

    def _require_spec(self, args: argparse.Namespace) -> str:
        if not args.spec:
            raise SpecParseError(f"--spec is required for --command {args.command}")
        return args.spec

    def command_analyze(self, args: argparse.Namespace) -> Tuple[bool, Dict[str, Any]]:
        ring = self.catalog.build_ring(self._require_spec(args))
        report = self.morphic.ring_properties(ring)
        return True, report.model_dump(mode="json")

    def command_classify(self, args: argparse.Namespace) -> Tuple[bool, Dict[str, Any]]:
        extension = self.catalog.build_extension(self._require_spec(args))
        report = self.structures.reconcile(extension.base, extension.bimodule)
        return report.passed, report.model_dump(mode="json")

    def command_witness(self, args: argparse.Namespace) -> Tuple[bool, Dict[str, Any]]:
        built = self.catalog.build(self._require_spec(args))
        ring = self.catalog.build_ring(args.spec)
        if args.element is None:
            raise SpecParseError("--element is required for --command witness")
        try:
            a = int(args.element)
        except ValueError as e:
            raise SpecParseError(f"--element must be an element index, got '{args.element}'") from e
        if not 0 <= a < ring.order:
            raise SpecParseError(f"Element {a} out of range for a ring of order {ring.order}")

        result: Dict[str, Any] = {"element": a, "regularity": self.morphic.regularity(ring, a).model_dump(mode="json")}
        if built is not ring:
            result["rendered"] = built.render(a)
        for side in ("left", "right", "two-sided"):
            witness = self.morphic.morphic_witness(ring, a, side)
            result[f"{side}_morphic"] = witness.model_dump(mode="json") if witness else None
        for side in ("left", "right"):
            witness = self.morphic.quasi_morphic_witness(ring, a, side)
            result[f"{side}_quasi_morphic"] = witness.model_dump(mode="json") if witness else None
        return True, result

    def command_lattice(self, args: argparse.Namespace) -> Tuple[bool, Dict[str, Any]]:
        extension = self.catalog.build_extension(self._require_spec(args))
        strict = self.morphic.is_morphic_ring(extension.as_ring)
        if not strict:
            logger.warning("Extension is not morphic; building the lattice map without the principal-image alarm")
        lattice = self.structures.build_lattice_map(extension, strict=strict)
        return lattice.passed, lattice.model_dump(mode="json")

    def command_qtriv(self, args: argparse.Namespace) -> Tuple[bool, Dict[str, Any]]:
        domain = self._domain(args.domain)
        if args.element:
            e = self._parse(lambda: self.torsion.qtriv_element(domain, args.element))
            w = self.torsion.morphic_partner(e)
            report = self.torsion.verify_partner(e, w, sample_bound=args.bound)
            return report.passed, report.model_dump(mode="json")
        bound = args.bound or min(self.torsion.sample_bound(domain), 1000)
        report = self.torsion.verify_partners(domain, count=1000, bound=bound)
        return report.passed, report.model_dump(mode="json")

    def command_snf(self, args: argparse.Namespace) -> Tuple[bool, Dict[str, Any]]:
        domain, rows = load_matrix_file(args.matrix_file)
        base = self._domain(domain)
        matrix = self._parse(lambda: BaseMatrix.from_grid(base, [[self.torsion.element(base, str(v)) for v in row] for row in rows]))
        result = self.diagonal.smith_normal_form(matrix)
        check = self.diagonal.verify_smith(matrix, result)
        return check.passed, {
            "p": result.p.to_json(),
            "d": result.d.to_json(),
            "q": result.q.to_json(),
            "invariant_factors": [x.to_json() for x in result.invariant_factors],
            "op_log": [op.to_json() for op in result.ops],
            "check": check.model_dump(mode="json"),
        }

    def command_diag(self, args: argparse.Namespace) -> Tuple[bool, Dict[str, Any]]:
        domain, rows = load_matrix_file(args.matrix_file)
        base = self._domain(domain)
        matrix = self._parse(lambda: TrivExtMatrix.from_grid(base, [[self._qtriv_entry(base, v) for v in row] for row in rows]))
        witness = self.diagonal.matrix_morphic_witness(matrix)
        check = self.diagonal.verify_diagonalization(matrix, witness.diagonalization)
        return check.passed, {
            "diagonalization": witness.diagonalization.summary().model_dump(mode="json"),
            "partner": witness.partner.to_json(),
            "diagonal_partner": witness.diagonal_partner.to_json(),
            "samples": witness.samples,
            "check": check.model_dump(mode="json"),
        }

    def command_verify(self, args: argparse.Namespace) -> Tuple[bool, Dict[str, Any]]:
        sizes = SuiteSizes.scaled(args.bound) if args.bound else SuiteSizes()
        suite = VerificationService(self.settings).run(sizes)
        return suite.passed, suite.model_dump(mode="json")

    def command_catalog(self, args: argparse.Namespace) -> Tuple[bool, Dict[str, Any]]:
        entries = [
            {"name": entry.name, "spec": render_spec(parse_spec(entry.spec)), "kind": entry.kind}
            for entry in self.catalog.catalog()
        ]
        return True, {"entries": entries}

    # Parsing helpers

    def _domain(self, name: str) -> EuclideanDomain:
        return self._parse(lambda: self.torsion.domain(name))

    def _qtriv_entry(self, domain: EuclideanDomain, value: Any) -> QTrivExtElement:
        if isinstance(value, dict):
            return QTrivExtElement(self.torsion.element(domain, str(value.get("r", 0))), self.torsion.fraction(domain, str(value.get("m", 0))))
        return self.torsion.qtriv_element(domain, str(value))

    @staticmethod
    def _parse(build):
        try:
            return build()
        except PreconditionError as e:
            raise SpecParseError(str(e)) from e


def load_matrix_file(path: Optional[str]) -> Tuple[str, List[List[Any]]]:
    """
    Read a matrix job: {"domain": "Z", "matrix": [[...], ...]}.

    Entries are integers or polynomial strings for snf, and "r,p/q" strings
    or {"r": ..., "m": "p/q"} objects for diag.

    Raises:
        SpecParseError: If the file is missing or malformed
    """
    if not path:
        raise SpecParseError("--matrix-file is required for snf and diag")
    try:
        job = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise SpecParseError(f"Cannot read matrix file '{path}': {e}") from e
    if isinstance(job, list):
        job = {"matrix": job}
    rows = job.get("matrix") if isinstance(job, dict) else None
    if not rows or not all(isinstance(row, list) and row for row in rows):
        raise SpecParseError(f"Matrix file '{path}' needs a non-empty 'matrix' list of rows")
    return str(job.get("domain", "Z")), rows


# Output


def render_json(report: CommandReport) -> str:
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2)


def render_text(report: CommandReport) -> str:
    """Indented key: value listing, keys sorted."""
    lines = [f"command: {report.command}", f"passed: {report.passed}", f"seed: {report.seed}"]
    if report.spec:
        lines.append(f"spec: {report.spec}")

    def walk(value: Any, indent: int) -> None:
        pad = "  " * indent
        if isinstance(value, dict):
            for key in sorted(value):
                item = value[key]
                if isinstance(item, (dict, list)) and item:
                    lines.append(f"{pad}{key}:")
                    walk(item, indent + 1)
                else:
                    lines.append(f"{pad}{key}: {item}")
        elif isinstance(value, list) and all(not isinstance(x, (dict, list)) for x in value):
            lines.append(f"{pad}{value}")
        else:
            for item in value:
                lines.append(f"{pad}-")
                walk(item, indent + 1)

    walk(report.model_dump(mode="json")["result"], 1)
    return "\n".join(lines)


def emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
        logger.info(f"Report written to {out}")
    else:
        print(text)


def main(argv: Optional[List[str]] = None) -> int:
    """Main application logic; returns the exit code."""
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level or os.environ.get("MORPHIC_LOG_LEVEL", "INFO"))

    try:
        overrides: Dict[str, Any] = parse_caps(args.caps)
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.output_format:
            overrides["output_format"] = args.output_format
        if args.log_level:
            overrides["log_level"] = args.log_level
        try:
            settings = load_settings(**overrides)
        except SettingsError as e:
            raise SpecParseError(f"Invalid configuration: {e}") from e

        logger.info(f"{settings.app_name} v{settings.app_version}: command={args.command} seed={settings.seed}")
        report = CommandRunner(settings).run(args.command, args)
    except CapExceededError as e:
        logger.error(f"Cap exceeded: {e}")
        return EXIT_CAP
    except SpecParseError as e:
        logger.error(f"Specification error: {e}")
        return EXIT_PARSE
    except TheoremViolationError as e:
        logger.error(f"Alarm: {e}")
        return EXIT_FAILED
    except ValidationError as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_PARSE

    text = render_json(report) if settings.output_format == "json" else render_text(report)
    emit(text, args.out)
    if not report.passed:
        logger.warning(f"Command {args.command} reported a failed property")
        return EXIT_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
