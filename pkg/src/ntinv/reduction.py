"""First and second reduced echelon forms and the zero-class test."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import InternalInvariantViolation
from .eto import F, EtoLog, Q, apply_f, apply_q, q_condition
from .sltm import Sltm


@dataclass
class ReductionResult:
    reduced: Sltm
    log: EtoLog
    form: str  # "1ref" or "2ref"


def compute_wall(s: Sltm) -> tuple[int, ...]:
    """Wall recursion on a reduced matrix: ``r_{j+1} = min{r > r_j : c_r >= r_j}``."""
    nonzero = [r for r in range(1, s.n + 1) if not s.is_zero_row(r)]
    if not nonzero:
        return (0,)
    wall = [nonzero[0]]
    while True:
        nxt = [r for r in range(wall[-1] + 1, s.n + 1) if s.leader(r) >= wall[-1]]
        if not nxt:
            return tuple(wall)
        wall.append(nxt[0])


def brick_rows(wall: tuple[int, ...], n: int) -> list[tuple[int, int]]:
    """Row intervals ``[r_j, r_{j+1}[`` of each brick."""
    ends = list(wall[1:]) + [n + 1]
    return [(a, b - 1) for a, b in zip(wall, ends)]


def brick_cols(wall: tuple[int, ...]) -> list[tuple[int, int]]:
    """Column intervals ``[r_{j-1}, r_j[`` of each brick, with ``r_0 = 1``."""
    starts = [1] + list(wall[:-1])
    return [(a, b - 1) for a, b in zip(starts, wall)]


def _leader_ok(s: Sltm, r: int) -> bool:
    c = s.leader(r)
    return c > 1 and not s.removable(r, c)


def is_1ref(s: Sltm) -> bool:
    if s.is_zero():
        return True
    zero = [s.is_zero_row(r) for r in range(1, s.n + 1)]
    first = zero.index(False)
    if any(zero[first:]):
        return False
    prev = 0
    for r in range(first + 1, s.n + 1):
        if not _leader_ok(s, r):
            return False
        c = s.leader(r)
        if c < prev:
            return False
        prev = c
    return True


def is_2ref(s: Sltm) -> bool:
    if s.is_zero():
        return True
    zero = [s.is_zero_row(r) for r in range(1, s.n + 1)]
    first = zero.index(False)
    if any(zero[first:]):
        return False
    if not all(_leader_ok(s, r) for r in range(first + 1, s.n + 1)):
        return False
    wall = compute_wall(s)
    for (lo, hi), cols in zip(brick_rows(wall, s.n), brick_cols(wall)):
        prev = 0
        for r in range(lo, hi + 1):
            if not cols[0] <= s.leader(r) <= cols[1]:
                return False
            mu = s.row_measure(r, cols)
            if mu < prev:
                return False
            prev = mu
    return True


def in_zero_class(u: Sltm) -> bool:
    """Zero-class test: every nonzero entry off column 1 has all ``Delta^(2)`` zero."""
    return all(c == 1 or u.removable(r, c) for r, c in u.nonzero_positions())


def _eliminate(t: Sltm, log: EtoLog) -> Sltm:
    """Zero removable leaders (column 1 first, then to a fixpoint) with ``beta = t_rc/2``."""
    f = t.spec
    cap = t.n * t.n + 1
    for r in range(2, t.n + 1):
        if t.leader(r) == 1:
            op = Q(r, 1, f.half(t.t(r, 1)))
            t = apply_q(t, op.r0, op.k0, op.beta)
            log.record(op, t)
    rounds = 0
    changed = True
    while changed:
        changed = False
        rounds += 1
        if rounds > cap:
            raise InternalInvariantViolation("leader elimination did not reach a fixpoint")
        for r in range(2, t.n + 1):
            c = t.leader(r)
            if c == 0 or not (c == 1 or t.removable(r, c)):
                continue
            beta = f.half(t.t(r, c))
            if c > 1 and not q_condition(t, r, c, beta):
                raise InternalInvariantViolation(f"Q at ({r},{c}) with beta={beta} is inadmissible")
            t = apply_q(t, r, c, beta)
            log.record(Q(r, c, beta), t)
            changed = True
    return t


def _insertion_sort(t: Sltm, lo: int, hi: int, key: Callable[[Sltm, int], int], log: EtoLog) -> Sltm:
    """Stable sort of rows ``lo..hi`` by ``key`` using adjacent F-swaps."""
    for k in range(lo + 1, hi + 1):
        r = k
        while r > lo and key(t, r - 1) > key(t, r):
            try:
                t = apply_f(t, r - 1, r)
            except Exception as exc:
                raise InternalInvariantViolation(f"F({r - 1},{r}) inadmissible during reordering: {exc}") from exc
            log.record(F(r - 1, r), t)
            r -= 1
    return t


def reduce_1ref(t: Sltm) -> ReductionResult:
    log = EtoLog(t.spec)
    t = _eliminate(t, log)
    t = _insertion_sort(t, 1, t.n, lambda s, r: 0 if s.is_zero_row(r) else 1, log)
    t = _insertion_sort(t, 1, t.n, lambda s, r: s.leader(r), log)
    if not is_1ref(t):
        raise InternalInvariantViolation(f"reduction output is not in 1-REF: {t!r}")
    return ReductionResult(t, log, "1ref")


def reduce_2ref(t: Sltm) -> ReductionResult:
    if is_2ref(t):
        return ReductionResult(t, EtoLog(t.spec), "2ref")
    res = reduce_1ref(t)
    s, log = res.reduced, res.log
    if not s.is_zero():
        wall = compute_wall(s)
        for (lo, hi), cols in zip(brick_rows(wall, s.n), brick_cols(wall)):
            s = _insertion_sort(s, lo, hi, lambda m, r, cols=cols: m.row_measure(r, cols), log)
    if not is_2ref(s):
        raise InternalInvariantViolation(f"reduction output is not in 2-REF: {s!r}")
    return ReductionResult(s, log, "2ref")
