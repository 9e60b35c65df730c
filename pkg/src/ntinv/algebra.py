"""The algebra A(T): squarefree monomial basis, rewriting, and homomorphism checks."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import AmbientMismatch, ParseError, SizeMismatch
from .field import FieldSpec, Raw
from .sltm import Sltm

Monomial = int  # bitmask: bit i-1 set iff X_i divides the monomial
Gamma = list[list[Raw]]


def monomial(*indices: int) -> Monomial:
    m = 0
    for i in indices:
        if m >> (i - 1) & 1:
            raise ValueError(f"X{i} repeated; monomials are squarefree")
        m |= 1 << (i - 1)
    return m


def support(m: Monomial) -> list[int]:
    return [i + 1 for i in range(m.bit_length()) if m >> i & 1]


def format_monomial(m: Monomial) -> str:
    return "*".join(f"X{i}" for i in support(m)) or "1"


def parse_monomial(text: str) -> Monomial:
    text = text.strip()
    if text == "1":
        return 0
    parts = [part.strip() for part in text.split("*")]
    if not all(re.fullmatch(r"X[1-9]\d*", part) for part in parts):
        raise ParseError(f"bad monomial {text!r}")
    try:
        return monomial(*(int(part[1:]) for part in parts))
    except ValueError as exc:
        raise ParseError(f"bad monomial {text!r}: {exc}") from None


def normalize(raw: Mapping[Sequence[int], Raw], t: Sltm) -> AlgebraElement:
    """Rewrite ``X_i^2`` (largest repeated index first) until every monomial is squarefree."""
    f = t.spec
    pending: dict[tuple[int, ...], Raw] = {}
    done: dict[Monomial, Raw] = {}

    def add(target: dict, key, c: Raw) -> None:
        v = f.add(target.get(key, f.zero), c)
        if v == 0:
            target.pop(key, None)
        else:
            target[key] = v

    for exps, c in raw.items():
        if len(exps) != t.n or any(e < 0 for e in exps):
            raise SizeMismatch(f"exponent vector {exps} does not fit n={t.n}")
        if f.canon(c) != 0:
            add(pending, tuple(exps), f.canon(c))
    while pending:
        exps, c = pending.popitem()
        rep = [i for i, e in enumerate(exps) if e >= 2]
        if not rep:
            add(done, sum(1 << i for i, e in enumerate(exps) if e), c)
            continue
        i = rep[-1]
        for j in range(i):
            tij = t.t(i + 1, j + 1)
            if tij != 0:
                new = list(exps)
                new[i] -= 1
                new[j] += 1
                add(pending, tuple(new), f.mul(c, tij))
    return AlgebraElement(done, t)


@dataclass
class AlgebraElement:
    """A linear combination of squarefree monomials of A(T); zero coefficients are not stored."""

    terms: dict[Monomial, Raw]
    ambient: Sltm

    @classmethod
    def generator(cls, t: Sltm, i: int) -> AlgebraElement:
        return cls({monomial(i): t.spec.one}, t)

    @classmethod
    def unit(cls, t: Sltm) -> AlgebraElement:
        return cls({0: t.spec.one}, t)

    @classmethod
    def linear(cls, t: Sltm, coeffs: Sequence[Raw]) -> AlgebraElement:
        """``sum_i coeffs[i-1] X_i``."""
        return cls({1 << i: c for i, c in enumerate(coeffs) if c != 0}, t)

    def _check(self, other: AlgebraElement) -> None:
        if self.ambient != other.ambient:
            raise AmbientMismatch("elements of different algebras")

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        self._check(other)
        f = self.ambient.spec
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = f.add(out.get(m, f.zero), c)
            if v == 0:
                out.pop(m, None)
            else:
                out[m] = v
        return AlgebraElement(out, self.ambient)

    def scale(self, c: Raw) -> AlgebraElement:
        f = self.ambient.spec
        if c == 0:
            return AlgebraElement({}, self.ambient)
        return AlgebraElement({m: f.mul(c, v) for m, v in self.terms.items()}, self.ambient)

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        return self + other.scale(self.ambient.spec.neg(self.ambient.spec.one))

    def __mul__(self, other: AlgebraElement) -> AlgebraElement:
        return multiply(self, other)

    def is_zero(self) -> bool:
        return not self.terms

    def degree_set(self) -> set[int]:
        return {2 * bin(m).count("1") for m in self.terms}

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        f = self.ambient.spec
        return " + ".join(f"{f.format_raw(c)}*{format_monomial(m)}" for m, c in sorted(self.terms.items()))


def _exps(m: Monomial, n: int) -> list[int]:
    return [m >> i & 1 for i in range(n)]


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Distribute, add exponents, normalize."""
    a._check(b)
    t = a.ambient
    f = t.spec
    raw: dict[tuple[int, ...], Raw] = {}
    for ma, ca in a.terms.items():
        ea = _exps(ma, t.n)
        for mb, cb in b.terms.items():
            key = tuple(x + y for x, y in zip(ea, _exps(mb, t.n)))
            raw[key] = f.add(raw.get(key, f.zero), f.mul(ca, cb))
    return normalize(raw, t)


def basis(n: int) -> list[Monomial]:
    """The ``2^n`` squarefree monomials."""
    return list(range(1 << n))


def gamma_image(gamma: Gamma, s: Sltm, j: int) -> AlgebraElement:
    """``gamma(X_j) = sum_i gamma_{ij} Y_i`` in A(S)."""
    return AlgebraElement.linear(s, [gamma[i][j - 1] for i in range(s.n)])


def is_homomorphism(gamma: Gamma, t: Sltm, s: Sltm) -> bool:
    """True iff every defining relation of A(T) maps to zero in A(S) under Gamma."""
    if t.n != s.n or len(gamma) != t.n or any(len(row) != t.n for row in gamma):
        raise SizeMismatch("Gamma, T and S must share the size n")
    if t.spec != s.spec:
        raise AmbientMismatch("T and S live over different fields")
    imgs = [gamma_image(gamma, s, j) for j in range(1, t.n + 1)]
    for r in range(1, t.n + 1):
        g = imgs[r - 1]
        acc = g * g
        for j in range(1, r):
            trj = t.t(r, j)
            if trj != 0:
                acc = acc - (imgs[j - 1] * g).scale(trj)
        if not acc.is_zero():
            return False
    return True


def determinant(gamma: Gamma, spec: FieldSpec) -> Raw:
    """Determinant by Gaussian elimination over the field."""
    n = len(gamma)
    a = [list(row) for row in gamma]
    det = spec.one
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return spec.zero
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = spec.neg(det)
        det = spec.mul(det, a[col][col])
        inv = spec.inv(a[col][col])
        for r in range(col + 1, n):
            if a[r][col] != 0:
                factor = spec.mul(a[r][col], inv)
                a[r] = [spec.sub(x, spec.mul(factor, y)) for x, y in zip(a[r], a[col])]
    return det


def identity_gamma(n: int, spec: FieldSpec) -> Gamma:
    return [[spec.one if i == j else spec.zero for j in range(n)] for i in range(n)]


def parse_gamma(text: str, spec: FieldSpec, source: str = "<string>") -> Gamma:
    """Gamma file: ``n <size>`` then ``n`` rows of ``n`` literals; ``#`` comments."""
    lines = [(no, ln.strip()) for no, ln in enumerate(text.splitlines(), 1) if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise ParseError("empty gamma file", source)
    no, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "n" or not parts[1].isdigit():
        raise ParseError(f"bad size line {head!r}", source, no)
    n = int(parts[1])
    if len(lines) - 1 != n:
        raise ParseError(f"expected {n} rows, found {len(lines) - 1}", source, no)
    out = []
    for no, ln in lines[1:]:
        items = ln.split()
        if len(items) != n:
            raise ParseError(f"expected {n} entries, found {len(items)}", source, no)
        try:
            out.append([spec.parse_raw(x) for x in items])
        except (ParseError, ZeroDivisionError) as exc:
            raise ParseError(str(exc), source, no) from None
    return out


def format_gamma(gamma: Gamma, spec: FieldSpec) -> str:
    lines = [f"n {len(gamma)}"] + [" ".join(spec.format_raw(x) for x in row) for row in gamma]
    return "\n".join(lines) + "\n"


def gamma_to_strings(gamma: Gamma, spec: FieldSpec) -> list[list[str]]:
    return [[spec.format_raw(x) for x in row] for row in gamma]


def gamma_from_values(values: Iterable[Iterable[object]], spec: FieldSpec) -> Gamma:
    return [[spec.parse_raw(x) if isinstance(x, str) else spec.canon(x) for x in row] for row in values]
