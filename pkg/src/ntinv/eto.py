"""Elementary triangular operations P, F, Q with admissibility checks and logs."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Union

from .errors import (
    FPreconditionViolated,
    IndexOrderViolation,
    LeaderPositionViolated,
    ParseError,
    QPreconditionViolated,
    ZeroScalar,
)
from .field import FieldElement, FieldSpec, Raw
from .sltm import Sltm


class _AnyBeta:
    """Sentinel: every nonzero beta is admissible."""

    _instance: _AnyBeta | None = None

    def __new__(cls) -> _AnyBeta:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ANY"


ANY = _AnyBeta()


@dataclass(frozen=True)
class P:
    r1: int
    alpha: Raw


@dataclass(frozen=True)
class F:
    r1: int
    r2: int


@dataclass(frozen=True)
class Q:
    r0: int
    k0: int
    beta: Raw


Eto = Union[P, F, Q]


def _raw(t: Sltm, x: FieldElement | Raw | int) -> Raw:
    return x.value if isinstance(x, FieldElement) else t.spec.canon(x)


def apply_p(t: Sltm, r1: int, alpha: FieldElement | Raw | int) -> Sltm:
    """Scale row ``r1`` by ``alpha^-1`` and column ``r1`` by ``alpha``."""
    a = _raw(t, alpha)
    if a == 0:
        raise ZeroScalar("P needs a nonzero scalar")
    t._check_index(r1)
    f = t.spec
    ainv = f.inv(a)
    upd = {(r1, k): f.mul(ainv, t.t(r1, k)) for k in range(1, r1)}
    upd.update({(r, r1): f.mul(a, t.t(r, r1)) for r in range(r1 + 1, t.n + 1)})
    return t.replace(upd)


def f_violation(t: Sltm, r1: int, r2: int) -> str | None:
    """Describe the first failed F condition, or None when admissible."""
    if not 1 <= r1 < r2 <= t.n:
        return f"F needs 1 <= r1 < r2 <= n, got ({r1},{r2})"
    for j in range(r1, r2):
        if t.t(r2, j) != 0:
            return f"condition (a) fails: t[{r2},{j}] != 0"
    for r in range(r1 + 1, r2 + 1):
        if t.t(r, r1) != 0:
            return f"condition (b) fails: t[{r},{r1}] != 0"
    return None


def apply_f(t: Sltm, r1: int, r2: int) -> Sltm:
    """Swap rows and columns ``r1 < r2`` when conditions (a) and (b) hold."""
    why = f_violation(t, r1, r2)
    if why is not None:
        raise FPreconditionViolated(why)

    def sigma(x: int) -> int:
        return r2 if x == r1 else r1 if x == r2 else x

    rows = [[t.t(sigma(r), sigma(k)) for k in range(1, r)] for r in range(1, t.n + 1)]
    return Sltm(t.n, t.spec, rows)


def _q_leader_check(t: Sltm, r0: int, k0: int) -> None:
    if not 1 <= k0 < r0 <= t.n:
        raise IndexOrderViolation(f"Q needs 1 <= k0 < r0 <= n, got ({r0},{k0})")
    for k in range(k0 + 1, r0):
        if t.t(r0, k) != 0:
            raise LeaderPositionViolated(f"t[{r0},{k}] != 0 right of k0={k0}")


def q_condition(t: Sltm, r0: int, k0: int, beta: Raw) -> bool:
    """``Delta^(1)_{i,k0,r0} = beta*t_{k0,i}`` for every ``i < k0``."""
    f = t.spec
    one = f.one
    return all(t.delta_raw(one, i, k0, r0) == f.mul(beta, t.t(k0, i)) for i in range(1, k0))


def q_admissible(t: Sltm, r0: int, k0: int) -> Raw | _AnyBeta | None:
    """The admissible beta for Q at ``(r0, k0)``: a value, ``ANY``, or None."""
    _q_leader_check(t, r0, k0)
    if k0 == 1:
        return ANY
    f = t.spec
    beta: Raw | None = None
    for i in range(1, k0):
        if t.t(k0, i) != 0:
            beta = f.div(t.delta_raw(f.one, i, k0, r0), t.t(k0, i))
            break
    if beta is None:
        return ANY if all(t.delta_raw(f.one, i, k0, r0) == 0 for i in range(1, k0)) else None
    if beta == 0 or not q_condition(t, r0, k0, beta):
        return None
    return beta


def apply_q(t: Sltm, r0: int, k0: int, beta: FieldElement | Raw | int) -> Sltm:
    """``t_{r0,k0} -> t_{r0,k0} - 2 beta`` and ``t_{r,k0} += beta*t_{r,r0}`` below."""
    b = _raw(t, beta)
    if b == 0:
        raise ZeroScalar("Q needs a nonzero scalar")
    _q_leader_check(t, r0, k0)
    if k0 > 1 and not q_condition(t, r0, k0, b):
        raise QPreconditionViolated(f"beta={b} fails the Delta condition at ({r0},{k0})")
    f = t.spec
    upd = {(r0, k0): f.sub(t.t(r0, k0), f.add(b, b))}
    for r in range(r0 + 1, t.n + 1):
        if t.t(r, r0) != 0:
            upd[(r, k0)] = f.add(t.t(r, k0), f.mul(b, t.t(r, r0)))
    return t.replace(upd)


def apply(t: Sltm, op: Eto) -> Sltm:
    if isinstance(op, P):
        return apply_p(t, op.r1, op.alpha)
    if isinstance(op, F):
        return apply_f(t, op.r1, op.r2)
    return apply_q(t, op.r0, op.k0, op.beta)


def apply_all(t: Sltm, ops: Iterable[Eto]) -> Sltm:
    for op in ops:
        t = apply(t, op)
    return t


def eto_to_dict(op: Eto, spec: FieldSpec) -> dict:
    if isinstance(op, P):
        return {"op": "P", "r1": op.r1, "alpha": spec.format_raw(op.alpha)}
    if isinstance(op, F):
        return {"op": "F", "r1": op.r1, "r2": op.r2}
    return {"op": "Q", "r0": op.r0, "k0": op.k0, "beta": spec.format_raw(op.beta)}


def eto_from_dict(d: dict, spec: FieldSpec) -> Eto:
    try:
        kind = d["op"]
        if kind == "P":
            return P(int(d["r1"]), spec.parse_raw(str(d["alpha"])))
        if kind == "F":
            return F(int(d["r1"]), int(d["r2"]))
        if kind == "Q":
            return Q(int(d["r0"]), int(d["k0"]), spec.parse_raw(str(d["beta"])))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad ETO record {d!r}: {exc}") from None
    raise ParseError(f"unknown ETO kind in {d!r}")


@dataclass
class EtoLog:
    """Ordered ETO steps, each with the digest of the matrix it produced."""

    spec: FieldSpec
    steps: list[tuple[Eto, str]] = field(default_factory=list)

    def record(self, op: Eto, result: Sltm) -> None:
        self.steps.append((op, result.digest()))

    @property
    def ops(self) -> list[Eto]:
        return [op for op, _ in self.steps]

    def __len__(self) -> int:
        return len(self.steps)

    def extend(self, other: EtoLog) -> None:
        self.steps.extend(other.steps)

    def replay(self, source: Sltm) -> Sltm:
        """Apply every step to ``source``, checking each recorded digest."""
        t = source
        for idx, (op, digest) in enumerate(self.steps):
            t = apply(t, op)
            if digest and t.digest() != digest:
                raise QPreconditionViolated(f"replay diverges at step {idx + 1}")
        return t

    def to_records(self) -> list[dict]:
        return [dict(eto_to_dict(op, self.spec), hash=d) for op, d in self.steps]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(rec) + "\n" for rec in self.to_records())

    @classmethod
    def from_jsonl(cls, text: str, spec: FieldSpec) -> EtoLog:
        log = cls(spec)
        for line in text.splitlines():
            if line.strip():
                rec = json.loads(line)
                log.steps.append((eto_from_dict(rec, spec), rec.get("hash", "")))
        return log
