"""
Exact arithmetic over the Euclidean domains Z and F_p[x], the torsion module
Q/R and the trivial extension R∝Q/R.

Integers are Python ints. Polynomials are tuples of coefficients, highest
degree first, with () for zero; F_p[x] arithmetic goes through
sympy.polys.galoistools.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Any, Dict, Iterator, Optional, Sequence, Tuple, Union

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (
    gf_add,
    gf_div,
    gf_from_int_poly,
    gf_gcdex,
    gf_mul,
    gf_neg,
    gf_sub,
)

from morphic_analyser.utils.validators import PreconditionError

Value = Union[int, Tuple[int, ...]]


class EuclideanDomain(ABC):
    """Raw-value arithmetic of a Euclidean domain; elements are wrapped by EuclideanElement."""

    tag: str
    zero_value: Value
    one_value: Value

    @abstractmethod
    def coerce(self, raw: Any) -> Value: ...

    @abstractmethod
    def add(self, a: Value, b: Value) -> Value: ...

    @abstractmethod
    def sub(self, a: Value, b: Value) -> Value: ...

    @abstractmethod
    def mul(self, a: Value, b: Value) -> Value: ...

    @abstractmethod
    def neg(self, a: Value) -> Value: ...

    @abstractmethod
    def divmod(self, a: Value, b: Value) -> Tuple[Value, Value]: ...

    @abstractmethod
    def gcdex(self, a: Value, b: Value) -> Tuple[Value, Value, Value]:
        """(s, t, g) with s*a + t*b = g and g canonical."""

    @abstractmethod
    def canonical_unit(self, a: Value) -> Value:
        """Unit u with u*a canonical (non-negative or monic); one for zero."""

    @abstractmethod
    def unit_inverse(self, u: Value) -> Value: ...

    @abstractmethod
    def size(self, a: Value) -> int:
        """Euclidean size: |a| or degree (zero is smallest)."""

    @abstractmethod
    def random(self, rng: np.random.Generator, bound: int) -> Value: ...

    @abstractmethod
    def nonzero_elements(self, bound: int) -> Iterator[Value]:
        """Canonical nonzero elements up to bound (|a| <= bound or degree <= bound)."""

    @abstractmethod
    def residues(self, a: Value) -> Iterator[Value]:
        """Canonical residues modulo a nonzero a."""

    @abstractmethod
    def render(self, a: Value) -> str: ...

    @abstractmethod
    def to_json(self, a: Value) -> Any: ...

    def is_zero(self, a: Value) -> bool:
        return a == self.zero_value

    def is_unit(self, a: Value) -> bool:
        return not self.is_zero(a) and self.size(a) == self.size(self.one_value)

    def normalize(self, a: Value) -> Value:
        return self.mul(self.canonical_unit(a), a)

    def divides(self, d: Value, a: Value) -> bool:
        if self.is_zero(d):
            return self.is_zero(a)
        return self.is_zero(self.divmod(a, d)[1])

    def exact_quotient(self, a: Value, d: Value) -> Value:
        q, r = self.divmod(a, d)
        if not self.is_zero(r):
            raise PreconditionError(f"{self.render(d)} does not divide {self.render(a)}")
        return q

    def gcd(self, a: Value, b: Value) -> Value:
        return self.gcdex(a, b)[2]

    def lcm(self, a: Value, b: Value) -> Value:
        if self.is_zero(a) or self.is_zero(b):
            return self.zero_value
        return self.normalize(self.exact_quotient(self.mul(a, b), self.gcd(a, b)))

    def element(self, raw: Any) -> "EuclideanElement":
        return EuclideanElement(self, self.coerce(raw))

    @property
    def zero(self) -> "EuclideanElement":
        return EuclideanElement(self, self.zero_value)

    @property
    def one(self) -> "EuclideanElement":
        return EuclideanElement(self, self.one_value)

    def random_element(self, rng: np.random.Generator, bound: int) -> "EuclideanElement":
        return EuclideanElement(self, self.random(rng, bound))


class IntegerDomain(EuclideanDomain):
    """The integers."""

    tag = "ZZ"
    zero_value = 0
    one_value = 1

    def coerce(self, raw: Any) -> int:
        return int(raw)

    def add(self, a: int, b: int) -> int:
        return a + b

    def sub(self, a: int, b: int) -> int:
        return a - b

    def mul(self, a: int, b: int) -> int:
        return a * b

    def neg(self, a: int) -> int:
        return -a

    def divmod(self, a: int, b: int) -> Tuple[int, int]:
        if b == 0:
            raise PreconditionError("Division by zero")
        return divmod(a, b)

    def gcdex(self, a: int, b: int) -> Tuple[int, int, int]:
        s, t, g = (int(v) for v in ZZ.gcdex(ZZ(a), ZZ(b)))
        if g < 0:
            s, t, g = -s, -t, -g
        return s, t, g

    def canonical_unit(self, a: int) -> int:
        return -1 if a < 0 else 1

    def unit_inverse(self, u: int) -> int:
        if u not in (1, -1):
            raise PreconditionError(f"{u} is not a unit")
        return u

    def size(self, a: int) -> int:
        return abs(a)

    def random(self, rng: np.random.Generator, bound: int) -> int:
        return int(rng.integers(-bound, bound + 1))

    def nonzero_elements(self, bound: int) -> Iterator[int]:
        return iter(range(1, bound + 1))

    def residues(self, a: int) -> Iterator[int]:
        return iter(range(abs(a)))

    def render(self, a: int) -> str:
        return str(a)

    def to_json(self, a: int) -> int:
        return a


class PolynomialDomain(EuclideanDomain):
    """F_p[x] with dense coefficient tuples, highest degree first."""

    zero_value: Tuple[int, ...] = ()
    one_value: Tuple[int, ...] = (1,)

    def __init__(self, p: int):
        self.p = p
        self.tag = f"GF({p})[x]"

    @staticmethod
    def _out(poly) -> Tuple[int, ...]:
        return tuple(int(c) for c in poly)

    def _in(self, a: Tuple[int, ...]):
        return [ZZ(c) for c in a]

    def coerce(self, raw: Any) -> Tuple[int, ...]:
        coefficients = [int(raw)] if isinstance(raw, (int, np.integer)) else [int(c) for c in raw]
        return self._out(gf_from_int_poly(coefficients, self.p))

    def add(self, a, b):
        return self._out(gf_add(self._in(a), self._in(b), self.p, ZZ))

    def sub(self, a, b):
        return self._out(gf_sub(self._in(a), self._in(b), self.p, ZZ))

    def mul(self, a, b):
        return self._out(gf_mul(self._in(a), self._in(b), self.p, ZZ))

    def neg(self, a):
        return self._out(gf_neg(self._in(a), self.p, ZZ))

    def divmod(self, a, b):
        if not b:
            raise PreconditionError("Division by the zero polynomial")
        q, r = gf_div(self._in(a), self._in(b), self.p, ZZ)
        return self._out(q), self._out(r)

    def gcdex(self, a, b):
        s, t, g = gf_gcdex(self._in(a), self._in(b), self.p, ZZ)
        return self._out(s), self._out(t), self._out(g)

    def canonical_unit(self, a):
        if not a:
            return self.one_value
        return (pow(a[0], -1, self.p),)

    def unit_inverse(self, u):
        if len(u) != 1:
            raise PreconditionError(f"{self.render(u)} is not a unit")
        return (pow(u[0], -1, self.p),)

    def size(self, a) -> int:
        return len(a) - 1

    def random(self, rng: np.random.Generator, bound: int):
        return self.coerce(rng.integers(0, self.p, size=bound + 1).tolist())

    def nonzero_elements(self, bound: int) -> Iterator[Tuple[int, ...]]:
        for degree in range(bound + 1):
            for tail in cartesian(range(self.p), repeat=degree):
                yield (1,) + tail

    def residues(self, a) -> Iterator[Tuple[int, ...]]:
        for coefficients in cartesian(range(self.p), repeat=self.size(a)):
            yield self.coerce(coefficients)

    def render(self, a) -> str:
        if not a:
            return "0"
        degree = len(a) - 1
        terms = []
        for i, c in enumerate(a):
            k = degree - i
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
                continue
            head = "" if c == 1 else str(c)
            terms.append(f"{head}x" if k == 1 else f"{head}x^{k}")
        return "+".join(terms)

    def to_json(self, a) -> list:
        return list(a)


def _require_same(first: EuclideanDomain, second: EuclideanDomain) -> None:
    if first.tag != second.tag:
        raise PreconditionError(f"Domain mismatch: {first.tag} vs {second.tag}")


@dataclass(frozen=True, eq=False)
class EuclideanElement:
    """An element of a Euclidean domain with operator arithmetic."""

    domain: EuclideanDomain
    value: Value

    def _wrap(self, value: Value) -> "EuclideanElement":
        return EuclideanElement(self.domain, value)

    def _other(self, other: "EuclideanElement") -> Value:
        _require_same(self.domain, other.domain)
        return other.value

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EuclideanElement):
            return NotImplemented
        return self.domain.tag == other.domain.tag and self.value == other.value

    def __hash__(self) -> int:
        return hash((self.domain.tag, self.value))

    def __add__(self, other: "EuclideanElement") -> "EuclideanElement":
        if not isinstance(other, EuclideanElement):
            return NotImplemented
        return self._wrap(self.domain.add(self.value, self._other(other)))

    def __sub__(self, other: "EuclideanElement") -> "EuclideanElement":
        if not isinstance(other, EuclideanElement):
            return NotImplemented
        return self._wrap(self.domain.sub(self.value, self._other(other)))

    def __mul__(self, other):
        if not isinstance(other, EuclideanElement):
            return NotImplemented
        return self._wrap(self.domain.mul(self.value, self._other(other)))

    def __neg__(self) -> "EuclideanElement":
        return self._wrap(self.domain.neg(self.value))

    def __divmod__(self, other: "EuclideanElement") -> Tuple["EuclideanElement", "EuclideanElement"]:
        q, r = self.domain.divmod(self.value, self._other(other))
        return self._wrap(q), self._wrap(r)

    def exact_div(self, other: "EuclideanElement") -> "EuclideanElement":
        return self._wrap(self.domain.exact_quotient(self.value, self._other(other)))

    def is_zero(self) -> bool:
        return self.domain.is_zero(self.value)

    def is_unit(self) -> bool:
        return self.domain.is_unit(self.value)

    def unit_inverse(self) -> "EuclideanElement":
        return self._wrap(self.domain.unit_inverse(self.value))

    def canonical_unit(self) -> "EuclideanElement":
        return self._wrap(self.domain.canonical_unit(self.value))

    def normalized(self) -> "EuclideanElement":
        return self._wrap(self.domain.normalize(self.value))

    def divides(self, other: "EuclideanElement") -> bool:
        return self.domain.divides(self.value, self._other(other))

    def gcd(self, other: "EuclideanElement") -> "EuclideanElement":
        return self._wrap(self.domain.gcd(self.value, self._other(other)))

    def lcm(self, other: "EuclideanElement") -> "EuclideanElement":
        return self._wrap(self.domain.lcm(self.value, self._other(other)))

    @property
    def size(self) -> int:
        return self.domain.size(self.value)

    def to_json(self) -> Any:
        return self.domain.to_json(self.value)

    def __str__(self) -> str:
        return self.domain.render(self.value)

    def __repr__(self) -> str:
        return f"EuclideanElement({self.domain.tag}, {self})"


@dataclass(frozen=True)
class FractionModOne:
    """The class of p/q in Q/R, kept coprime and canonical (0 <= p < q, or deg p < deg q with q monic)."""

    p: EuclideanElement
    q: EuclideanElement

    @classmethod
    def reduce(cls, p: EuclideanElement, q: EuclideanElement) -> "FractionModOne":
        """
        Canonical representative of p/q modulo R.

        Raises:
            PreconditionError: If q is zero or the domains differ
        """
        _require_same(p.domain, q.domain)
        if q.is_zero():
            raise PreconditionError("Zero denominator")
        g = p.gcd(q)
        p, q = p.exact_div(g), q.exact_div(g)
        unit = q.canonical_unit()
        p, q = unit * p, unit * q
        return cls(divmod(p, q)[1], q)

    @classmethod
    def zero(cls, domain: EuclideanDomain) -> "FractionModOne":
        return cls(domain.zero, domain.one)

    @property
    def domain(self) -> EuclideanDomain:
        return self.q.domain

    def is_zero(self) -> bool:
        return self.p.is_zero()

    def __add__(self, other: "FractionModOne") -> "FractionModOne":
        return FractionModOne.reduce(self.p * other.q + other.p * self.q, self.q * other.q)

    def __neg__(self) -> "FractionModOne":
        return FractionModOne.reduce(-self.p, self.q)

    def __sub__(self, other: "FractionModOne") -> "FractionModOne":
        return self + (-other)

    def scale(self, r: EuclideanElement) -> "FractionModOne":
        """r * (p/q)."""
        return FractionModOne.reduce(r * self.p, self.q)

    def __rmul__(self, r: EuclideanElement) -> "FractionModOne":
        if not isinstance(r, EuclideanElement):
            return NotImplemented
        return self.scale(r)

    def render(self) -> str:
        if isinstance(self.domain, IntegerDomain):
            return f"{self.p}/{self.q}"
        return f"({self.p})/({self.q})"

    def to_json(self) -> Any:
        if isinstance(self.domain, IntegerDomain):
            return self.render()
        return {"p": self.p.to_json(), "q": self.q.to_json()}

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class QTrivExtElement:
    """(r, x) in R∝Q/R; (r, x)(s, y) = (rs, ry + sx)."""

    r: EuclideanElement
    m: FractionModOne

    @classmethod
    def zero(cls, domain: EuclideanDomain) -> "QTrivExtElement":
        return cls(domain.zero, FractionModOne.zero(domain))

    @classmethod
    def one(cls, domain: EuclideanDomain) -> "QTrivExtElement":
        return cls(domain.one, FractionModOne.zero(domain))

    @classmethod
    def lift(cls, r: EuclideanElement) -> "QTrivExtElement":
        return cls(r, FractionModOne.zero(r.domain))

    @property
    def domain(self) -> EuclideanDomain:
        return self.r.domain

    def is_zero(self) -> bool:
        return self.r.is_zero() and self.m.is_zero()

    def is_unit(self) -> bool:
        return self.r.is_unit()

    def __add__(self, other: "QTrivExtElement") -> "QTrivExtElement":
        return QTrivExtElement(self.r + other.r, self.m + other.m)

    def __neg__(self) -> "QTrivExtElement":
        return QTrivExtElement(-self.r, -self.m)

    def __sub__(self, other: "QTrivExtElement") -> "QTrivExtElement":
        return self + (-other)

    def __mul__(self, other: "QTrivExtElement") -> "QTrivExtElement":
        if not isinstance(other, QTrivExtElement):
            return NotImplemented
        return QTrivExtElement(self.r * other.r, other.m.scale(self.r) + self.m.scale(other.r))

    def unit_inverse(self) -> "QTrivExtElement":
        """(u, x)^-1 = (u^-1, -u^-2 x)."""
        inverse = self.r.unit_inverse()
        return QTrivExtElement(inverse, (-self.m).scale(inverse * inverse))

    def to_json(self) -> Dict[str, Any]:
        return {"r": self.r.to_json(), "m": self.m.to_json()}

    def __str__(self) -> str:
        return f"({self.r}, {self.m})"


@dataclass(frozen=True)
class AnnihilatorDescriptor:
    """
    The subset {(b, y) : g | b, den(y) | bound} of R∝Q/R.

    g = 0 means b = 0; bound None means every y.
    """

    ring_generator: EuclideanElement
    module_bound: Optional[EuclideanElement]

    def contains(self, element: QTrivExtElement) -> bool:
        if not self.ring_generator.divides(element.r):
            return False
        return self.module_bound is None or element.m.q.divides(self.module_bound)

    def witnesses(self) -> Sequence[QTrivExtElement]:
        """Generating elements of the set, used as first probes against another set."""
        domain = self.ring_generator.domain
        out = []
        if not self.ring_generator.is_zero():
            out.append(QTrivExtElement.lift(self.ring_generator))
        if self.module_bound is not None and not self.module_bound.is_unit():
            out.append(QTrivExtElement(domain.zero, FractionModOne.reduce(domain.one, self.module_bound)))
        return out

    def to_json(self) -> Dict[str, Any]:
        return {
            "ring_generator": self.ring_generator.to_json(),
            "module_bound": None if self.module_bound is None else self.module_bound.to_json(),
        }
