"""
Parser for ring and bimodule specifications.

Grammar (whitespace-insensitive):

    ring   := "Z(" int ")" | "GF(" int "," poly ")" | "Mat(" int "," ring ")"
            | "Prod(" ring "," ring ")" | "TrivExt(" ring "," module ")"
            | "Quot(" ring "," list ")" | "Table(" string ")"
    module := "Reg(" ring ")" | "Twist(" ring "," endo ")" | "Zero(" ring ")"
            | "Quot(" module "," list ")" | "Sum(" module "," module ")"
    endo   := "id" | "frobenius" | "swap" | "conj(" (int | matrix) ")" | list
    list   := "[" [int {"," int}] "]"
    matrix := "[" list {"," list} "]"
    poly   := polynomial in x with integer coefficients

Also the explicit-table file format: the order n, then n rows of the
addition table, then n rows of the multiplication table, whitespace
separated; lines starting with '#' are comments.
"""

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, List, Optional, Tuple, Union

import numpy as np

from morphic_analyser.utils.validators import ValidationError, Validators

Span = Tuple[int, int]

RING_KINDS = ("Z", "GF", "Mat", "Prod", "TrivExt", "Table")
MODULE_KINDS = ("Reg", "Twist", "Zero", "Sum")
ENDO_NAMES = ("id", "frobenius", "swap")

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


class SpecParseError(ValidationError):
    """Syntax or semantic error in a specification, with the source span."""

    def __init__(self, message: str, span: Optional[Span] = None):
        self.span = span
        where = f" at {span[0]}..{span[1]}" if span else ""
        super().__init__(f"{message}{where}")


@dataclass(frozen=True)
class SpecNode:
    """One node of a parsed specification."""

    kind: str
    args: Tuple[Any, ...] = ()
    span: Span = field(default=(0, 0), compare=False)

    @property
    def sort(self) -> str:
        """'ring', 'module' or 'endo'."""
        if self.kind in MODULE_KINDS or (self.kind == "Quot" and self.args[0].sort == "module"):
            return "module"
        if self.kind in RING_KINDS or self.kind == "Quot":
            return "ring"
        return "endo"


_TOKEN = re.compile(r"\s*(?:(?P<int>-?\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<string>\"[^\"]*\")|(?P<punct>[(),\[\]^+*\-]))")


class _Parser:
    """Recursive descent over a token list."""

    def __init__(self, text: str):
        self.text = text
        self.tokens: List[Tuple[str, str, Span]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            match = _TOKEN.match(text, pos)
            if not match or match.end() == pos:
                raise SpecParseError(f"Unexpected character {text[pos:].lstrip()[:1]!r}", (pos, pos + 1))
            kind = match.lastgroup
            start = match.start(kind)
            self.tokens.append((kind, match.group(kind), (start, match.end())))
            pos = match.end()
        self.index = 0

    # Token helpers

    def _peek(self) -> Optional[Tuple[str, str, Span]]:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def _end_span(self) -> Span:
        return (len(self.text), len(self.text))

    def _next(self) -> Tuple[str, str, Span]:
        token = self._peek()
        if token is None:
            raise SpecParseError("Unexpected end of input", self._end_span())
        self.index += 1
        return token

    def _expect(self, value: str) -> Span:
        kind, text, span = self._next()
        if text != value:
            raise SpecParseError(f"Expected '{value}', found '{text}'", span)
        return span

    def _int(self) -> int:
        kind, text, span = self._next()
        if kind != "int":
            raise SpecParseError(f"Expected an integer, found '{text}'", span)
        return int(text)

    def _raw_until_close(self) -> Tuple[str, Span]:
        """Source text of a polynomial argument (up to the closing parenthesis)."""
        start_token = self._peek()
        if start_token is None:
            raise SpecParseError("Expected a polynomial", self._end_span())
        start = start_token[2][0]
        close = self.text.find(")", start)
        if close < 0:
            raise SpecParseError("Unclosed polynomial argument", (start, len(self.text)))
        while self._peek() is not None and self._peek()[2][0] < close:
            self.index += 1
        return self.text[start:close], (start, close)

    # Grammar

    def parse(self) -> SpecNode:
        node = self.structure()
        token = self._peek()
        if token is not None:
            raise SpecParseError(f"Trailing input '{token[1]}'", token[2])
        return node

    def structure(self) -> SpecNode:
        kind, name, span = self._next()
        if kind != "name":
            raise SpecParseError(f"Expected a constructor name, found '{name}'", span)
        start = span[0]
        if name not in RING_KINDS + MODULE_KINDS + ("Quot",):
            raise SpecParseError(f"Unknown constructor '{name}'", span)
        self._expect("(")

        if name == "Z":
            args: Tuple[Any, ...] = (self._int(),)
        elif name == "GF":
            p = self._int()
            _check_prime(p, span)
            self._expect(",")
            text, poly_span = self._raw_until_close()
            args = (p, tuple(parse_poly(text, p, poly_span)))
        elif name == "Mat":
            k = self._int()
            self._expect(",")
            args = (k, self._ring())
        elif name == "Prod":
            first = self._ring()
            self._expect(",")
            args = (first, self._ring())
        elif name == "TrivExt":
            ring = self._ring()
            self._expect(",")
            args = (ring, self._module())
        elif name == "Table":
            kind, text, token_span = self._next()
            if kind != "string":
                raise SpecParseError("Table expects a quoted name or path", token_span)
            args = (text[1:-1],)
        elif name in ("Reg", "Zero"):
            args = (self._ring(),)
        elif name == "Twist":
            ring = self._ring()
            self._expect(",")
            args = (ring, self.endo())
        elif name == "Sum":
            first = self._module()
            self._expect(",")
            args = (first, self._module())
        else:
            inner = self.structure()
            self._expect(",")
            args = (inner, tuple(self._int_list()))
        end = self._expect(")")[1]
        return SpecNode(name, args, (start, end))

    def _ring(self) -> SpecNode:
        node = self.structure()
        if node.sort != "ring":
            raise SpecParseError(f"Expected a ring, found {node.kind}", node.span)
        return node

    def _module(self) -> SpecNode:
        node = self.structure()
        if node.sort != "module":
            raise SpecParseError(f"Expected a module, found {node.kind}", node.span)
        return node

    def _int_list(self) -> List[int]:
        self._expect("[")
        values: List[int] = []
        if self._peek() is not None and self._peek()[1] == "]":
            self._next()
            return values
        while True:
            values.append(self._int())
            kind, text, span = self._next()
            if text == "]":
                return values
            if text != ",":
                raise SpecParseError(f"Expected ',' or ']', found '{text}'", span)

    def endo(self) -> SpecNode:
        token = self._peek()
        if token is None:
            raise SpecParseError("Expected an endomorphism", self._end_span())
        kind, text, span = token
        if text == "[":
            return SpecNode("image", (tuple(self._int_list()),), span)
        self._next()
        if text in ENDO_NAMES:
            return SpecNode(text, (), span)
        if text != "conj":
            raise SpecParseError(f"Unknown endomorphism '{text}'", span)
        self._expect("(")
        token = self._peek()
        if token is not None and token[1] == "[":
            self._next()
            rows = [tuple(self._int_list())]
            while self._next()[1] == ",":
                rows.append(tuple(self._int_list()))
            argument: Union[int, Tuple[Tuple[int, ...], ...]] = tuple(rows)
            end = self._expect(")")[1]
        else:
            argument = self._int()
            end = self._expect(")")[1]
        return SpecNode("conj", (argument,), (span[0], end))


def _check_prime(p: int, span: Span) -> None:
    is_valid, message = Validators.validate_prime(p)
    if not is_valid:
        raise SpecParseError(f"GF needs a prime characteristic: {message}", span)


def parse_spec(text: str) -> SpecNode:
    """
    Parse a ring or module specification.

    Raises:
        SpecParseError: On syntax errors, with the offending span
    """
    return _Parser(text).parse()


def render_spec(node: SpecNode) -> str:
    """Canonical text of a parsed specification; parse(render(x)) == x."""
    kind, args = node.kind, node.args
    if kind in ENDO_NAMES:
        return kind
    if kind == "image":
        return _render_list(args[0])
    if kind == "conj":
        argument = args[0]
        if isinstance(argument, int):
            return f"conj({argument})"
        return f"conj([{', '.join(_render_list(row) for row in argument)}])"
    if kind == "Z":
        return f"Z({args[0]})"
    if kind == "GF":
        return f"GF({args[0]}, {render_poly(args[1])})"
    if kind == "Table":
        return f'Table("{args[0]}")'
    if kind == "Quot":
        return f"Quot({render_spec(args[0])}, {_render_list(args[1])})"
    inner = ", ".join(str(a) if isinstance(a, int) else render_spec(a) for a in args)
    return f"{kind}({inner})"


def _render_list(values) -> str:
    return "[" + ", ".join(str(v) for v in values) + "]"


_TERM = re.compile(r"^(?P<coef>\d*)\*?(?P<x>x(?:\^(?P<exp>\d+))?)?$")


def parse_poly(text: str, p: int, span: Optional[Span] = None) -> List[int]:
    """
    Parse a polynomial in x into coefficients mod p, highest degree first.

    Accepts terms like 3, x, 2x, 2*x^3, joined by + and -.

    Raises:
        SpecParseError: If a term cannot be read
    """
    compact = text.replace(" ", "")
    if not compact:
        raise SpecParseError("Empty polynomial", span)
    coefficients = {}
    for sign, term in re.findall(r"([+-]?)([^+-]+)", compact):
        match = _TERM.match(term)
        if not match or (not match.group("coef") and not match.group("x")):
            raise SpecParseError(f"Cannot read polynomial term '{term}'", span)
        coef = int(match.group("coef")) if match.group("coef") else 1
        if match.group("x") is None:
            exponent = 0
        else:
            exponent = int(match.group("exp")) if match.group("exp") else 1
        coef = -coef if sign == "-" else coef
        coefficients[exponent] = coefficients.get(exponent, 0) + coef
    if "".join(s + t for s, t in re.findall(r"([+-]?)([^+-]+)", compact)) != compact.lstrip("+"):
        raise SpecParseError(f"Cannot read polynomial '{text}'", span)
    degree = max(coefficients)
    out = [coefficients.get(k, 0) % p for k in range(degree, -1, -1)]
    while len(out) > 1 and out[0] == 0:
        out.pop(0)
    return out


def render_poly(coefficients) -> str:
    """Inverse of parse_poly for reduced coefficient lists."""
    coefficients = list(coefficients)
    degree = len(coefficients) - 1
    terms = []
    for i, c in enumerate(coefficients):
        k = degree - i
        if c == 0:
            continue
        if k == 0:
            terms.append(str(c))
        else:
            head = "" if c == 1 else str(c)
            terms.append(f"{head}x" if k == 1 else f"{head}x^{k}")
    return "+".join(terms) if terms else "0"


def resolve_table_path(name: str) -> Path:
    """A bundled table name (data/<name>.tbl) or a filesystem path."""
    bundled = DATA_DIR / f"{name}.tbl"
    if bundled.exists():
        return bundled
    path = Path(name)
    if path.exists():
        return path
    raise SpecParseError(f"Table '{name}' not found")


def load_table(name: str) -> Tuple[np.ndarray, np.ndarray]:
    """
    Read an explicit-table ring file.

    Returns:
        Tuple[np.ndarray, np.ndarray]: Addition and multiplication tables

    Raises:
        SpecParseError: If the file is malformed
    """
    path = resolve_table_path(name)
    lines = [line.split("#", 1)[0] for line in path.read_text().splitlines()]
    values = " ".join(lines).split()
    try:
        numbers = [int(v) for v in values]
    except ValueError as e:
        raise SpecParseError(f"Table '{name}' contains a non-integer entry") from e
    if not numbers:
        raise SpecParseError(f"Table '{name}' is empty")
    n = numbers[0]
    if n < 1 or len(numbers) != 1 + 2 * n * n:
        raise SpecParseError(f"Table '{name}' needs 2*{n}^2 entries after the order, found {len(numbers) - 1}")
    tables = np.asarray(numbers[1:], dtype=np.int64).reshape(2, n, n)
    return tables[0], tables[1]
