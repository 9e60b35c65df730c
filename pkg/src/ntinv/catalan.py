"""Monotonic lattice paths, indexing matrices, Psi(P) and the Catalan lower bound.

Grid convention for ``m = n - 1``: nodes ``(x, y)`` with ``0 <= x, y <= m``; the
path starts at ``(0, m)`` and ends at ``(m, 0)`` with steps R = (+1, 0) and
D = (0, -1), staying on or below the anti-diagonal ``x + y = m``. Vertical line
``x`` is matrix column ``x + 1``; horizontal line ``y >= 1`` is matrix row
``n + 1 - y``; the line ``y = 0`` carries no entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Any

from .errors import FieldNotEnumerable, PreconditionViolated, SizeMismatch
from .field import FieldSpec
from .invariants import MeasureMatrix, MeasureSequence, Wall, ij_candidates, measure_sequence, wall
from .iso import NON_ISOMORPHIC, decide
from .reduction import is_1ref, is_2ref
from .sltm import Sltm, format_sltm


def catalan_number(m: int) -> int:
    return comb(2 * m, m) // (m + 1)


@dataclass(frozen=True)
class LatticePath:
    m: int
    steps: str

    def __post_init__(self) -> None:
        if len(self.steps) != 2 * self.m or self.steps.count("R") != self.m or set(self.steps) - {"R", "D"}:
            raise ValueError(f"{self.steps!r} is not a path on an {self.m}x{self.m} grid")
        rights = downs = 0
        for step in self.steps:
            rights += step == "R"
            downs += step == "D"
            if rights > downs:
                raise ValueError(f"{self.steps!r} passes above the diagonal")

    def nodes(self) -> list[tuple[int, int]]:
        x, y = 0, self.m
        out = [(x, y)]
        for step in self.steps:
            if step == "R":
                x += 1
            else:
                y -= 1
            out.append((x, y))
        return out

    def heights(self) -> list[int]:
        """``h[x]``: highest horizontal path edge touching vertical line ``x``."""
        h = [0] * (self.m + 1)
        pts = self.nodes()
        for (x0, y0), (x1, _), step in zip(pts, pts[1:], self.steps):
            if step == "R":
                h[x0] = max(h[x0], y0)
                h[x1] = max(h[x1], y0)
        return h

    @property
    def is_trivial(self) -> bool:
        return self.steps == "D" * self.m + "R" * self.m


@dataclass(frozen=True)
class IndexingMatrix:
    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def to_list(self) -> list[list[int]]:
        return [list(self.rows), list(self.cols)]


def enumerate_paths(m: int) -> list[LatticePath]:
    """All monotonic paths on an ``m x m`` grid, in lexicographic step order (D < R)."""
    if m < 1:
        raise ValueError("grid size must be >= 1")
    out = []
    for rpos in combinations(range(2 * m), m):
        steps = ["D"] * (2 * m)
        for i in rpos:
            steps[i] = "R"
        s = "".join(steps)
        rights = downs = 0
        ok = True
        for step in s:
            rights += step == "R"
            downs += step == "D"
            if rights > downs:
                ok = False
                break
        if ok:
            out.append(LatticePath(m, s))
    return sorted(out, key=lambda p: p.steps)


def indexing_matrix(path: LatticePath) -> IndexingMatrix:
    """Right-to-down turning nodes as (row, column) pairs."""
    n = path.m + 1
    pts = path.nodes()
    rows, cols = [], []
    for idx in range(1, len(path.steps)):
        if path.steps[idx - 1] == "R" and path.steps[idx] == "D":
            x, y = pts[idx]
            rows.append(n + 1 - y)
            cols.append(x + 1)
    return IndexingMatrix(tuple(rows), tuple(cols))


def psi(path: LatticePath, n: int, spec: FieldSpec, check: bool = True) -> Sltm:
    """Entry ``(i, j)`` is 1 iff its node lies in the lower region of the path."""
    if n != path.m + 1:
        raise SizeMismatch(f"path on a {path.m}-grid needs n = {path.m + 1}, got {n}")
    h = path.heights()
    entries = {}
    for x, hx in enumerate(h):
        for y in range(1, hx + 1):
            entries[(n + 1 - y, x + 1)] = 1
    s = Sltm.from_entries(n, spec, entries)
    if check and not (is_1ref(s) and is_2ref(s)):
        raise PreconditionViolated(f"Psi({path.steps}) is not reduced over {spec}")
    return s


def path_invariants(path: LatticePath) -> tuple[Wall, MeasureSequence]:
    """Wall and measure sequence from the indexing matrix alone."""
    a = indexing_matrix(path)
    r, c = a.rows, a.cols
    m = len(r)
    if m == 0:
        return (0,), ()
    idx = [0]
    while True:
        prev = r[idx[-1]]
        nxt = [j for j in range(idx[-1] + 1, m) if c[j] >= prev]
        if not nxt:
            break
        idx.append(nxt[0])
    w = tuple(r[i] for i in idx)
    seq = []
    for b, start in enumerate(idx):
        stop = idx[b + 1] if b + 1 < len(idx) else m
        shift = 0 if b == 0 else r[idx[b - 1]] - 1
        seq.append(MeasureMatrix(tuple(r[start:stop]), tuple(c[p] - shift for p in range(start, stop))))
    return w, tuple(seq)


def strict_witness(n: int, spec: FieldSpec) -> Sltm:
    """Ones at rows ``[4, n[`` in columns {1, 2} and at row ``n`` in columns {1, 3}."""
    if n < 5:
        raise SizeMismatch("the strictness witness needs n >= 5")
    entries = {(r, c): 1 for r in range(4, n) for c in (1, 2)}
    entries.update({(n, 1): 1, (n, 3): 1})
    return Sltm.from_entries(n, spec, entries)


def s00_matrix(u: object, v: object, spec: FieldSpec) -> Sltm:
    """Rows ``3 = (1, 1)`` and ``4 = (u, v, 1)``; ``u = v = 0`` gives the base matrix."""
    return Sltm.from_entries(4, spec, {(3, 1): 1, (3, 2): 1, (4, 1): u, (4, 2): v, (4, 3): 1})


def _mjson(m: MeasureSequence) -> list[dict]:
    return [mm.to_dict() for mm in m]


@dataclass
class CatalanReport:
    n: int
    field: str
    paths: list[dict[str, Any]] = field(default_factory=list)
    catalan: int = 0
    count_matches: bool = False
    invariants_agree: bool = False
    pairwise_distinct: bool = False
    unreduced_paths: list[str] = field(default_factory=list)
    strictness: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "field": self.field,
            "catalan": self.catalan,
            "path_count": len(self.paths),
            "count_matches": self.count_matches,
            "invariants_agree": self.invariants_agree,
            "pairwise_distinct": self.pairwise_distinct,
            "unreduced_paths": self.unreduced_paths,
            "strictness": self.strictness,
            "paths": self.paths,
        }


def lower_bound_experiment(n: int, spec: FieldSpec, strictness: bool = True, budget: int = 10**8) -> CatalanReport:
    if n < 3:
        raise SizeMismatch("the experiment needs n >= 3")
    m = n - 1
    rep = CatalanReport(n, str(spec), catalan=catalan_number(m))
    paths = enumerate_paths(m)
    rep.count_matches = len(paths) == rep.catalan
    agree = True
    seen = set()
    for path in paths:
        s = psi(path, n, spec, check=False)
        if not (is_1ref(s) and is_2ref(s)):
            rep.unreduced_paths.append(path.steps)
        pw, pm = path_invariants(path)
        mw, mm = wall(s), measure_sequence(s)
        ok = (pw, pm) == (mw, mm)
        agree &= ok
        seen.add((pw, pm))
        rep.paths.append({
            "steps": path.steps,
            "indexing_matrix": indexing_matrix(path).to_list(),
            "psi": format_sltm(s),
            "wall": list(pw),
            "measure_sequence": _mjson(pm),
            "matrix_invariants_agree": ok,
        })
    rep.invariants_agree = agree
    rep.pairwise_distinct = len(seen) == len(paths)
    if strictness:
        rep.strictness = strictness_check(n, spec, budget)
    return rep


def strictness_check(n: int, spec: FieldSpec, budget: int = 10**8) -> dict[str, Any]:
    """A matrix outside every Psi(P) class: (I,J)-test for n >= 5, search for n = 4."""
    if n >= 5:
        t = strict_witness(n, spec)
        key = (wall(t), measure_sequence(t))
        twins = [p for p in enumerate_paths(n - 1) if path_invariants(p) == key]
        ij_fires = all(not ij_candidates(psi(p, n, spec), t) for p in twins)
        return {
            "method": "ij_test",
            "witness": format_sltm(t),
            "twins": [p.steps for p in twins],
            "distinguished": ij_fires and all(psi(p, n, spec) != t for p in twins),
        }
    if n == 4:
        if not spec.is_finite:
            raise FieldNotEnumerable("the n = 4 strictness check enumerates over a finite field")
        t = s00_matrix(0, 0, spec)
        s1 = psi(LatticePath(3, "DRDRDR"), 4, spec)
        verdict = decide(t, s1, budget=budget)
        return {
            "method": "pruned_search",
            "witness": format_sltm(t),
            "twin": format_sltm(s1),
            "verdict": verdict.to_dict(),
            "distinguished": verdict.kind == NON_ISOMORPHIC,
        }
    return {"method": "none", "distinguished": False}
