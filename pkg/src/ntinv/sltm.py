"""Strictly lower triangular matrices with leaders, Delta values and measures.

Indices are 1-based throughout: entry ``t(r, c)`` is stored only for ``c < r``.
Intervals are inclusive pairs ``(lo, hi)``; an empty interval has ``hi < lo``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import IndexOrderViolation, IndexOutOfRange, ParseError, SizeMismatch
from .field import FieldElement, FieldSpec, Raw

Interval = tuple[int, int]


@dataclass(frozen=True)
class SubmatrixRange:
    rows: Interval
    cols: Interval


class Sltm:
    """An immutable strictly lower triangular ``n x n`` matrix over ``spec``."""

    __slots__ = ("n", "spec", "_rows", "_hash")

    def __init__(self, n: int, spec: FieldSpec, rows: Iterable[Sequence[Raw]]):
        if n < 1:
            raise SizeMismatch(f"matrix size must be >= 1, got {n}")
        stored = tuple(tuple(spec.canon(x) for x in row) for row in rows)
        if len(stored) != n or any(len(row) != r for r, row in enumerate(stored)):
            raise SizeMismatch("row r must carry exactly r-1 entries")
        self.n = n
        self.spec = spec
        self._rows = stored
        self._hash = hash((n, spec, stored))

    # constructors

    @classmethod
    def zero(cls, n: int, spec: FieldSpec) -> Sltm:
        return cls(n, spec, ([spec.zero] * r for r in range(n)))

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows: Sequence[Sequence[object]]) -> Sltm:
        """Build from the lower rows ``2..n`` (row ``r`` has ``r-1`` entries)."""
        n = len(rows) + 1
        conv = [[spec.parse_raw(x) if isinstance(x, str) else spec.canon(x) for x in row] for row in rows]
        return cls(n, spec, [[]] + conv)

    @classmethod
    def from_dense(cls, spec: FieldSpec, dense: Sequence[Sequence[object]]) -> Sltm:
        n = len(dense)
        rows = []
        for r, row in enumerate(dense):
            if len(row) != n:
                raise SizeMismatch("dense matrix must be square")
            vals = [spec.parse_raw(x) if isinstance(x, str) else spec.canon(x) for x in row]
            if any(v != 0 for v in vals[r:]):
                raise IndexOrderViolation(f"row {r + 1} has a nonzero entry on or above the diagonal")
            rows.append(vals[:r])
        return cls(n, spec, rows)

    @classmethod
    def from_entries(cls, n: int, spec: FieldSpec, entries: dict[tuple[int, int], object]) -> Sltm:
        rows = [[spec.zero] * r for r in range(n)]
        for (r, c), x in entries.items():
            if not 1 <= c < r <= n:
                raise IndexOrderViolation(f"position ({r},{c}) is not strictly lower")
            rows[r - 1][c - 1] = spec.parse_raw(x) if isinstance(x, str) else spec.canon(x)
        return cls(n, spec, rows)

    def replace(self, updates: dict[tuple[int, int], Raw]) -> Sltm:
        rows = [list(row) for row in self._rows]
        for (r, c), x in updates.items():
            if not 1 <= c < r <= self.n:
                raise IndexOrderViolation(f"position ({r},{c}) is not strictly lower")
            rows[r - 1][c - 1] = x
        return Sltm(self.n, self.spec, rows)

    # access

    def t(self, r: int, c: int) -> Raw:
        """Raw entry ``t_{rc}`` (zero on and above the diagonal)."""
        if c >= r:
            return self.spec.zero
        return self._rows[r - 1][c - 1]

    def entry(self, r: int, c: int) -> FieldElement:
        self._check_index(r)
        self._check_index(c)
        return FieldElement(self.t(r, c), self.spec)

    def row(self, r: int) -> tuple[Raw, ...]:
        """The stored entries of row ``r`` (columns ``1..r-1``)."""
        self._check_index(r)
        return self._rows[r - 1]

    def rows(self) -> tuple[tuple[Raw, ...], ...]:
        return self._rows

    def dense(self) -> list[list[Raw]]:
        return [[self.t(r, c) for c in range(1, self.n + 1)] for r in range(1, self.n + 1)]

    def nonzero_positions(self) -> Iterator[tuple[int, int]]:
        for r in range(2, self.n + 1):
            for c, x in enumerate(self._rows[r - 1], start=1):
                if x != 0:
                    yield r, c

    def is_zero(self) -> bool:
        return all(x == 0 for row in self._rows for x in row)

    def is_zero_row(self, r: int) -> bool:
        return all(x == 0 for x in self.row(r))

    def _check_index(self, r: int) -> None:
        if not 1 <= r <= self.n:
            raise IndexOutOfRange(f"index {r} outside [1,{self.n}]")

    def _check_interval(self, iv: Interval) -> None:
        lo, hi = iv
        if lo > hi:
            raise IndexOutOfRange(f"empty interval [{lo},{hi}]")
        self._check_index(lo)
        self._check_index(hi)

    # derived quantities

    def leader(self, r: int) -> int:
        """Column of the rightmost nonzero entry of row ``r``, or 0 for a zero row."""
        row = self.row(r)
        for c in range(len(row), 0, -1):
            if row[c - 1] != 0:
                return c
        return 0

    def leaders(self) -> list[int]:
        return [self.leader(r) for r in range(1, self.n + 1)]

    def delta_raw(self, alpha: Raw, i: int, j: int, k: int) -> Raw:
        f = self.spec
        return f.add(f.mul(alpha, self.t(k, i)), f.mul(self.t(k, j), self.t(j, i)))

    def delta(self, alpha: FieldElement | Raw | int, i: int, j: int, k: int) -> FieldElement:
        """``alpha*t_{ki} + t_{kj}*t_{ji}`` for ``i < j < k``."""
        if not 1 <= i < j < k <= self.n:
            raise IndexOrderViolation(f"delta needs 1 <= i < j < k <= n, got ({i},{j},{k})")
        a = alpha.value if isinstance(alpha, FieldElement) else self.spec.canon(alpha)
        return FieldElement(self.delta_raw(a, i, j, k), self.spec)

    def removable(self, r: int, c: int) -> bool:
        """True iff ``Delta^(2)_{i,c,r} = 0`` for every ``i < c``."""
        two = self.spec.canon(2)
        return all(self.delta_raw(two, i, c, r) == 0 for i in range(1, c))

    def row_measure(self, r: int, cols: Interval | None = None) -> int:
        """Number of nonzero entries of row ``r`` within ``cols``."""
        self._check_index(r)
        lo, hi = cols if cols is not None else (1, self.n)
        if lo > hi:
            return 0
        self._check_interval((lo, hi))
        return sum(1 for c in range(lo, min(hi, r - 1) + 1) if self.t(r, c) != 0)

    def submatrix(self, rows: Interval | SubmatrixRange, cols: Interval | None = None) -> list[list[Raw]]:
        if isinstance(rows, SubmatrixRange):
            rows, cols = rows.rows, rows.cols
        assert cols is not None
        self._check_interval(rows)
        self._check_interval(cols)
        return [[self.t(r, c) for c in range(cols[0], cols[1] + 1)] for r in range(rows[0], rows[1] + 1)]

    # identity

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Sltm) and self.n == other.n and self.spec == other.spec and self._rows == other._rows

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(map(str, row)) for row in self._rows[1:])
        return f"Sltm(n={self.n}, {self.spec}, [{body}])"

    def digest(self) -> str:
        return hashlib.sha256(format_sltm(self).encode()).hexdigest()[:16]

    def pretty(self) -> str:
        cells = [[str(x) for x in row] for row in self.dense()]
        width = max(len(c) for row in cells for c in row)
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


def format_sltm(t: Sltm, comments: Sequence[str] = ()) -> str:
    """Serialize in the matrix text format."""
    lines = [f"# {c}" for c in comments]
    lines.append(t.spec.header())
    lines.append(f"n {t.n}")
    lines.extend(" ".join(t.spec.format_raw(x) for x in t.row(r)) for r in range(2, t.n + 1))
    return "\n".join(lines) + "\n"


def parse_sltm(text: str, source: str = "<string>") -> Sltm:
    """Parse the matrix text format; errors carry ``source:line``."""
    content = [
        (no, line.strip())
        for no, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.strip().startswith("#")
    ]
    if len(content) < 2:
        raise ParseError("expected 'field' and 'n' header lines", source)
    no, head = content[0]
    parts = head.split()
    if parts[:2] == ["field", "rational"] and len(parts) == 2:
        spec = FieldSpec.rationals()
    elif parts[:2] == ["field", "gf"] and len(parts) == 3:
        try:
            spec = FieldSpec.gf(int(parts[2]))
        except ValueError as exc:
            raise ParseError(str(exc), source, no) from None
    else:
        raise ParseError(f"bad field line {head!r}", source, no)
    no, head = content[1]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "n" or not parts[1].isdigit() or int(parts[1]) < 1:
        raise ParseError(f"bad size line {head!r}", source, no)
    n = int(parts[1])
    body = content[2:]
    if len(body) != n - 1:
        raise ParseError(f"expected {n - 1} row lines, found {len(body)}", source, body[-1][0] if body else no)
    rows: list[list[Raw]] = [[]]
    for r, (no, line) in enumerate(body, start=2):
        items = line.split()
        if len(items) != r - 1:
            raise ParseError(f"row {r} needs {r - 1} entries, found {len(items)}", source, no)
        try:
            rows.append([spec.parse_raw(x) for x in items])
        except ParseError as exc:
            raise ParseError(str(exc), source, no) from None
        except ZeroDivisionError as exc:
            raise ParseError(str(exc), source, no) from None
    return Sltm(n, spec, rows)


def read_sltm(path: str) -> Sltm:
    with open(path, encoding="utf-8") as fh:
        return parse_sltm(fh.read(), source=str(path))
