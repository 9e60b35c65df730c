"""Walls, bricks, measure sequences, TNul/TRank, I/J sets and the W/M/(I,J) tests."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterator

from .errors import NotReduced, PreconditionViolated, SizeMismatch, SpecMismatch, ZeroClass
from .field import Raw
from .reduction import brick_cols, brick_rows, compute_wall, is_1ref, is_2ref, reduce_1ref, reduce_2ref
from .sltm import Interval, Sltm

Wall = tuple[int, ...]
DISTINGUISHED = "distinguished"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Brick:
    index: int
    rows: Interval
    cols: Interval
    values: tuple[tuple[Raw, ...], ...]


@dataclass(frozen=True)
class MeasureMatrix:
    rows: tuple[int, ...]
    measures: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"rows": list(self.rows), "measures": list(self.measures)}


MeasureSequence = tuple[MeasureMatrix, ...]


def wall_of_ref(s: Sltm) -> Wall:
    if not (is_1ref(s) or is_2ref(s)):
        raise NotReduced("wall_of_ref needs a matrix in 1-REF or 2-REF")
    return compute_wall(s)


def wall(t: Sltm) -> Wall:
    return wall_of_ref(reduce_1ref(t).reduced)


def bricks(s: Sltm, w: Wall | None = None) -> list[Brick]:
    if not (is_1ref(s) or is_2ref(s)):
        raise NotReduced("bricks need a reduced matrix")
    w = compute_wall(s) if w is None else w
    if w == (0,):
        raise ZeroClass("the zero class has no bricks")
    out = []
    for j, (rows, cols) in enumerate(zip(brick_rows(w, s.n), brick_cols(w)), start=1):
        block = s.submatrix(rows, cols)
        out.append(Brick(j, rows, cols, tuple(tuple(row) for row in block)))
    return out


def measure_sequence_of_2ref(v: Sltm) -> MeasureSequence:
    if not is_2ref(v):
        raise NotReduced("measure sequences need a matrix in 2-REF")
    if v.is_zero():
        return ()
    w = compute_wall(v)
    seq = []
    for (lo, hi), cols in zip(brick_rows(w, v.n), brick_cols(w)):
        rows: list[int] = []
        mus: list[int] = []
        for r in range(lo, hi + 1):
            mu = v.row_measure(r, cols)
            if not mus or mu > mus[-1]:
                rows.append(r)
                mus.append(mu)
        seq.append(MeasureMatrix(tuple(rows), tuple(mus)))
    return tuple(seq)


def measure_sequence(t: Sltm) -> MeasureSequence:
    return measure_sequence_of_2ref(reduce_2ref(t).reduced)


def tnul_trank(s: Sltm) -> tuple[int, int]:
    if not is_1ref(s):
        raise NotReduced("TNul/TRank need a matrix in 1-REF")
    zeros = sum(1 for r in range(1, s.n + 1) if s.is_zero_row(r))
    return zeros, s.n - zeros


def ij_sets(t: Sltm, w: Wall | None = None) -> dict[int, frozenset[int]]:
    """Map each row ``r >= r_1`` to its support within its brick's columns."""
    if not is_2ref(t):
        raise NotReduced("I/J sets need a matrix in 2-REF")
    w = compute_wall(t) if w is None else w
    if w == (0,):
        raise ZeroClass("the zero class has no I/J sets")
    out = {}
    for (lo, hi), (c0, c1) in zip(brick_rows(w, t.n), brick_cols(w)):
        for r in range(lo, hi + 1):
            out[r] = frozenset(c for c in range(c0, c1 + 1) if t.t(r, c) != 0)
    return out


def rho_groups(w: Wall, m: MeasureSequence, n: int) -> list[tuple[int, ...]]:
    """Index groups a bijection rho must preserve: block 0 and each measure sub-interval."""
    groups = [tuple(range(1, w[0]))] if w[0] > 1 else []
    for (lo, hi), mm in zip(brick_rows(w, n), m):
        starts = list(mm.rows) + [hi + 1]
        groups.extend(tuple(range(a, b)) for a, b in zip(starts, starts[1:]))
    return groups


def iter_rhos(
    w: Wall, m: MeasureSequence, n: int, i_sets: dict[int, frozenset[int]] | None = None,
    j_sets: dict[int, frozenset[int]] | None = None,
) -> Iterator[dict[int, int]]:
    """Bijections rho (S-index to T-index) preserving the groups, optionally with
    ``rho(I_k) = J_{rho(k)}`` for every block row ``k``. Deterministic order."""
    groups = rho_groups(w, m, n)

    def consistent(rho: dict[int, int], group: tuple[int, ...]) -> bool:
        if i_sets is None or j_sets is None:
            return True
        for k in group:
            if k in i_sets and frozenset(rho[c] for c in i_sets[k]) != j_sets[rho[k]]:
                return False
        return True

    def rec(idx: int, rho: dict[int, int]) -> Iterator[dict[int, int]]:
        if idx == len(groups):
            yield dict(rho)
            return
        group = groups[idx]
        for image in permutations(group):
            rho.update(zip(group, image))
            if consistent(rho, group):
                yield from rec(idx + 1, rho)
        for k in group:
            rho.pop(k, None)

    yield from rec(0, {})


def _same_ambient(t: Sltm, s: Sltm) -> None:
    if t.n != s.n:
        raise SizeMismatch(f"sizes differ: {t.n} vs {s.n}")
    if t.spec != s.spec:
        raise SpecMismatch(f"fields differ: {t.spec} vs {s.spec}")


def w_test(t: Sltm, s: Sltm) -> str:
    _same_ambient(t, s)
    return DISTINGUISHED if wall(t) != wall(s) else INCONCLUSIVE


def m_test(t: Sltm, s: Sltm) -> str:
    _same_ambient(t, s)
    if wall(t) != wall(s):
        return INCONCLUSIVE
    return DISTINGUISHED if measure_sequence(t) != measure_sequence(s) else INCONCLUSIVE


def ij_candidates(t: Sltm, s: Sltm) -> list[dict[int, int]]:
    """All rho surviving the interval, sub-interval and (I,J) constraints."""
    _same_ambient(t, s)
    if not (is_2ref(t) and is_2ref(s)):
        raise PreconditionViolated("the (I,J)-test needs both matrices in 2-REF")
    wt, ws = compute_wall(t), compute_wall(s)
    mt, ms = measure_sequence_of_2ref(t), measure_sequence_of_2ref(s)
    if wt != ws or mt != ms or wt == (0,):
        raise PreconditionViolated("the (I,J)-test needs equal nonzero walls and measure sequences")
    return list(iter_rhos(wt, mt, t.n, ij_sets(s, ws), ij_sets(t, wt)))


def ij_test(t: Sltm, s: Sltm) -> str:
    return DISTINGUISHED if not ij_candidates(t, s) else INCONCLUSIVE


@dataclass(frozen=True)
class InvariantReport:
    wall: Wall
    measure_sequence: MeasureSequence
    tnul: int
    trank: int
    zero_class: bool

    def to_dict(self) -> dict:
        return {
            "wall": list(self.wall),
            "measure_sequence": [mm.to_dict() for mm in self.measure_sequence],
            "tnul": self.tnul,
            "trank": self.trank,
            "zero_class": self.zero_class,
        }


def invariant_report(t: Sltm) -> InvariantReport:
    one = reduce_1ref(t).reduced
    nul, rank = tnul_trank(one)
    w = compute_wall(one)
    return InvariantReport(w, measure_sequence(t), nul, rank, w == (0,))
