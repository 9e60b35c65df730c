"""Exact arithmetic over the rationals and odd prime fields GF(p).

Matrices store raw values (``Fraction`` for the rationals, ``int`` residues
for GF(p)); :class:`FieldSpec` supplies the arithmetic on raw values and
:class:`FieldElement` wraps a raw value together with its spec.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from .errors import FieldDivisionByZero, FieldNotEnumerable, ParseError, SpecMismatch

Raw = Union[int, Fraction]

_LITERAL = re.compile(r"^([+-]?)(\d+)(?:/(\d+))?$")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


@dataclass(frozen=True)
class FieldSpec:
    """A ground field: ``kind`` is ``"rational"`` or ``"gf"``; ``p`` only for GF(p)."""

    kind: str
    p: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "rational":
            if self.p is not None:
                raise ValueError("the rational field takes no modulus")
        elif self.kind == "gf":
            if self.p is None or self.p == 2 or not _is_prime(self.p):
                raise ValueError(f"GF(p) requires an odd prime p, got {self.p}")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> FieldSpec:
        return cls("rational")

    @classmethod
    def gf(cls, p: int) -> FieldSpec:
        return cls("gf", p)

    @property
    def is_finite(self) -> bool:
        return self.kind == "gf"

    @property
    def order(self) -> int:
        if self.p is None:
            raise FieldNotEnumerable("the rational field is infinite")
        return self.p

    def __str__(self) -> str:
        return "Q" if self.p is None else f"GF({self.p})"

    def header(self) -> str:
        """The ``field`` line of the matrix text format."""
        return "field rational" if self.p is None else f"field gf {self.p}"

    # raw-value arithmetic

    @property
    def zero(self) -> Raw:
        return 0 if self.p is not None else Fraction(0)

    @property
    def one(self) -> Raw:
        return 1 if self.p is not None else Fraction(1)

    def canon(self, x: Raw | int) -> Raw:
        if self.p is not None:
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise FieldDivisionByZero(f"{x} has no image in {self}")
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        return Fraction(x)

    def add(self, a: Raw, b: Raw) -> Raw:
        return (a + b) % self.p if self.p is not None else a + b

    def sub(self, a: Raw, b: Raw) -> Raw:
        return (a - b) % self.p if self.p is not None else a - b

    def mul(self, a: Raw, b: Raw) -> Raw:
        return (a * b) % self.p if self.p is not None else a * b

    def neg(self, a: Raw) -> Raw:
        return (-a) % self.p if self.p is not None else -a

    def inv(self, a: Raw) -> Raw:
        if a == 0:
            raise FieldDivisionByZero("inverse of zero")
        return pow(a, -1, self.p) if self.p is not None else 1 / a

    def div(self, a: Raw, b: Raw) -> Raw:
        return self.mul(a, self.inv(b))

    def half(self, a: Raw) -> Raw:
        return self.div(a, self.canon(2))

    def is_square_raw(self, a: Raw) -> bool:
        if self.p is not None:
            return a == 0 or pow(a, (self.p - 1) // 2, self.p) == 1
        if a < 0:
            return False
        num, den = a.numerator, a.denominator
        return math.isqrt(num) ** 2 == num and math.isqrt(den) ** 2 == den

    def elements(self) -> Iterator[Raw]:
        """All elements of a finite field in the order 0, 1, ..., p-1."""
        return iter(range(self.order))

    def nonzero(self) -> Iterator[Raw]:
        return iter(range(1, self.order))

    def parse_raw(self, text: str) -> Raw:
        m = _LITERAL.match(text.strip().replace("−", "-"))
        if m is None:
            raise ParseError(f"malformed element literal {text!r}")
        sign, num, den = m.groups()
        value = int(num) * (-1 if sign == "-" else 1)
        if den is None:
            return self.canon(value)
        if self.p is not None:
            raise ParseError(f"fraction literal {text!r} not allowed over {self}")
        if int(den) == 0:
            raise FieldDivisionByZero(f"zero denominator in {text!r}")
        return Fraction(value, int(den))

    def format_raw(self, a: Raw) -> str:
        return str(a)

    def element(self, x: Raw | int | str) -> FieldElement:
        raw = self.parse_raw(x) if isinstance(x, str) else self.canon(x)
        return FieldElement(raw, self)


@dataclass(frozen=True)
class FieldElement:
    """An immutable field element in canonical form."""

    value: Raw
    spec: FieldSpec

    def _check(self, other: object) -> FieldElement:
        if isinstance(other, int) and not isinstance(other, bool):
            return self.spec.element(other)
        if not isinstance(other, FieldElement):
            return NotImplemented  # type: ignore[return-value]
        if other.spec != self.spec:
            raise SpecMismatch(f"cannot combine {self.spec} with {other.spec}")
        return other

    def _wrap(self, raw: Raw) -> FieldElement:
        return FieldElement(raw, self.spec)

    def __add__(self, other: object) -> FieldElement:
        o = self._check(other)
        return o if o is NotImplemented else self._wrap(self.spec.add(self.value, o.value))

    __radd__ = __add__

    def __sub__(self, other: object) -> FieldElement:
        o = self._check(other)
        return o if o is NotImplemented else self._wrap(self.spec.sub(self.value, o.value))

    def __rsub__(self, other: object) -> FieldElement:
        o = self._check(other)
        return o if o is NotImplemented else self._wrap(self.spec.sub(o.value, self.value))

    def __mul__(self, other: object) -> FieldElement:
        o = self._check(other)
        return o if o is NotImplemented else self._wrap(self.spec.mul(self.value, o.value))

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> FieldElement:
        o = self._check(other)
        return o if o is NotImplemented else self._wrap(self.spec.div(self.value, o.value))

    def __rtruediv__(self, other: object) -> FieldElement:
        o = self._check(other)
        return o if o is NotImplemented else self._wrap(self.spec.div(o.value, self.value))

    def __neg__(self) -> FieldElement:
        return self._wrap(self.spec.neg(self.value))

    def inverse(self) -> FieldElement:
        return self._wrap(self.spec.inv(self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    def __bool__(self) -> bool:
        return self.value != 0

    def __str__(self) -> str:
        return self.spec.format_raw(self.value)


def arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Apply ``op`` (add, sub, mul, div or + - * /) to two elements of the same field."""
    if a.spec != b.spec:
        raise SpecMismatch(f"cannot combine {a.spec} with {b.spec}")
    ops = {"add": a.spec.add, "sub": a.spec.sub, "mul": a.spec.mul, "div": a.spec.div}
    ops.update({"+": ops["add"], "-": ops["sub"], "*": ops["mul"], "/": ops["div"]})
    if op not in ops:
        raise ValueError(f"unknown operation {op!r}")
    fn = ops[op]
    return FieldElement(fn(a.value, b.value), a.spec)


def is_square(a: FieldElement) -> bool:
    """True iff ``a = x**2`` for some ``x`` in the field (negatives are non-squares over Q)."""
    return a.spec.is_square_raw(a.value)


def parse_element(text: str, spec: FieldSpec) -> FieldElement:
    return FieldElement(spec.parse_raw(text), spec)


def parse_field(text: str) -> FieldSpec:
    """Parse ``rational``/``q`` or a prime ``p`` (CLI ``--field``)."""
    t = text.strip().lower()
    if t in ("rational", "q", "rationals"):
        return FieldSpec.rationals()
    if t.startswith("gf"):
        t = t[2:].strip("() ")
    try:
        return FieldSpec.gf(int(t))
    except ValueError as exc:
        raise ParseError(f"bad field {text!r}: {exc}") from None
