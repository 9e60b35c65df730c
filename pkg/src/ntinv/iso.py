"""Key-condition residuals, Gamma shapes, brute-force search and the decision pipeline."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Sequence

import numpy as np

from .algebra import Gamma, determinant, gamma_to_strings, identity_gamma, is_homomorphism
from .errors import BudgetExceeded, FieldNotEnumerable, PreconditionViolated, SizeMismatch, SpecMismatch
from .eto import EtoLog
from .field import FieldSpec, Raw
from .invariants import iter_rhos, ij_sets, measure_sequence_of_2ref
from .reduction import brick_rows, compute_wall, in_zero_class, is_2ref, reduce_1ref, reduce_2ref
from .sltm import Sltm

DEFAULT_BUDGET = 10**8

NON_ISOMORPHIC = "non_isomorphic"
ISOMORPHIC = "isomorphic"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Residual:
    r: int
    i: int
    k: int
    value: Raw


def _check_pair(t: Sltm, s: Sltm) -> None:
    if t.n != s.n:
        raise SizeMismatch(f"sizes differ: {t.n} vs {s.n}")
    if t.spec != s.spec:
        raise SpecMismatch(f"fields differ: {t.spec} vs {s.spec}")


def residuals(t: Sltm, s: Sltm, gamma: Gamma) -> list[Residual]:
    """Key-condition values for all ``(r, i, k)``, ``i < k``, in lexicographic order."""
    _check_pair(t, s)
    n, f = t.n, t.spec
    if len(gamma) != n or any(len(row) != n for row in gamma):
        raise SizeMismatch("Gamma must be n x n")

    def g(i: int, j: int) -> Raw:
        return gamma[i - 1][j - 1]

    out = []
    for r in range(1, n + 1):
        for i in range(1, n + 1):
            for k in range(i + 1, n + 1):
                ski = s.t(k, i)
                v = f.add(f.mul(f.canon(2), f.mul(g(i, r), g(k, r))), f.mul(f.mul(g(k, r), g(k, r)), ski))
                for j in range(1, r):
                    trj = t.t(r, j)
                    if trj == 0:
                        continue
                    inner = f.add(
                        f.add(f.mul(f.mul(g(k, j), g(k, r)), ski), f.mul(g(k, j), g(i, r))),
                        f.mul(g(i, j), g(k, r)),
                    )
                    v = f.sub(v, f.mul(trj, inner))
                out.append(Residual(r, i, k, v))
    return out


def satisfies_key_condition(t: Sltm, s: Sltm, gamma: Gamma) -> bool:
    return all(res.value == 0 for res in residuals(t, s, gamma))


def is_isomorphism(t: Sltm, s: Sltm, gamma: Gamma) -> bool:
    """Residuals vanish, ``det != 0``, and the algebra-level check agrees."""
    return (
        satisfies_key_condition(t, s, gamma)
        and determinant(gamma, t.spec) != 0
        and is_homomorphism(gamma, t, s)
    )


# Gamma shapes


@dataclass(frozen=True)
class GammaShape:
    """``rho`` maps S-indices (rows of Gamma) to T-indices (columns of Gamma)."""

    rho: tuple[int, ...]  # rho[i-1] = rho(i)
    nonzero_positions: frozenset[tuple[int, int]]
    free_positions: frozenset[tuple[int, int]]
    n: int

    @property
    def zero_pattern(self) -> frozenset[tuple[int, int]]:
        allp = {(i, j) for i in range(1, self.n + 1) for j in range(1, self.n + 1)}
        return frozenset(allp - self.nonzero_positions - self.free_positions)

    def admits(self, gamma: Gamma) -> bool:
        """True iff ``gamma`` fits this shape."""
        for i in range(1, self.n + 1):
            for j in range(1, self.n + 1):
                x = gamma[i - 1][j - 1]
                if (i, j) in self.nonzero_positions:
                    if x == 0:
                        return False
                elif (i, j) not in self.free_positions and x != 0:
                    return False
        return True


def block_index(wall: tuple[int, ...], x: int) -> int:
    """0 for ``[1, r_1[``, ``j`` for ``[r_j, r_{j+1}[``."""
    return sum(1 for r in wall if r <= x)


def gamma_shapes(t: Sltm, s: Sltm, use_ij: bool = True) -> list[GammaShape]:
    """Admissible supports for an isomorphism A(T) -> A(S) of reduced matrices."""
    _check_pair(t, s)
    if not (is_2ref(t) and is_2ref(s)):
        raise PreconditionViolated("Gamma shapes need both matrices in 2-REF")
    wt, ws = compute_wall(t), compute_wall(s)
    if wt == (0,) or ws == (0,):
        raise PreconditionViolated("Gamma shapes are not defined for the zero class")
    mt, ms = measure_sequence_of_2ref(t), measure_sequence_of_2ref(s)
    if wt != ws or mt != ms:
        raise PreconditionViolated("Gamma shapes need equal walls and measure sequences")
    n = t.n
    isets = ij_sets(s, ws) if use_ij else None
    jsets = ij_sets(t, wt) if use_ij else None
    blk = [block_index(wt, x) for x in range(n + 1)]
    free = frozenset((i, j) for i in range(1, n + 1) for j in range(1, n + 1) if blk[i] < blk[j])
    shapes = []
    for rho in iter_rhos(wt, mt, n, isets, jsets):
        nz = frozenset((i, rho[i]) for i in range(1, n + 1))
        shapes.append(GammaShape(tuple(rho[i] for i in range(1, n + 1)), nz, free, n))
    return shapes


# brute-force search over GF(p)


def _column_candidates(p: int, n: int, allowed: Sequence[str]) -> np.ndarray:
    """Lexicographic candidate columns; ``allowed[i]`` is 'z' (zero), 'n' (nonzero) or 'f' (free)."""
    ranges = [range(1) if a == "z" else range(1, p) if a == "n" else range(p) for a in allowed]
    cand = np.array(list(product(*ranges)), dtype=np.int64).reshape(-1, n)
    return cand[np.any(cand != 0, axis=1)]


class _Searcher:
    """Column-by-column DFS: residuals with index ``r`` only involve columns ``<= r``."""

    def __init__(self, t: Sltm, s: Sltm, budget: int):
        self.n = t.n
        self.p = t.spec.order
        self.budget = budget
        self.spent = 0
        self.trow = [[int(t.t(r, j)) for j in range(1, r)] for r in range(1, self.n + 1)]
        self.pairs = [(i, k) for i in range(self.n) for k in range(i + 1, self.n)]
        self.ski = np.array([int(s.t(k + 1, i + 1)) for i, k in self.pairs], dtype=np.int64)
        self.pi = np.array([i for i, _ in self.pairs], dtype=np.int64)
        self.pk = np.array([k for _, k in self.pairs], dtype=np.int64)

    def _filter(self, cols: list[np.ndarray], cand: np.ndarray, r: int) -> np.ndarray:
        self.spent += len(cand)
        if self.spent > self.budget:
            raise BudgetExceeded(f"search exceeded budget of {self.budget} candidates")
        p = self.p
        h = np.zeros(self.n, dtype=np.int64)
        for j, trj in enumerate(self.trow[r]):
            if trj:
                h = (h + trj * cols[j]) % p
        if not len(self.pairs):
            return cand
        ci = cand[:, self.pi]
        ck = cand[:, self.pk]
        hi = h[self.pi]
        hk = h[self.pk]
        res = (2 * ci * ck + ck * ck % p * self.ski - hk * ck % p * self.ski - hk * ci - hi * ck) % p
        return cand[np.all(res == 0, axis=1)]

    def _independent(self, basis: list[tuple[int, np.ndarray]], v: np.ndarray) -> tuple[int, np.ndarray] | None:
        """Reduce ``v`` against an echelon basis; return the new pivot row or None."""
        p = self.p
        v = v.copy()
        for piv, row in basis:
            if v[piv]:
                v = (v - v[piv] * row) % p
        nz = np.nonzero(v)[0]
        if not len(nz):
            return None
        piv = int(nz[0])
        return piv, (v * pow(int(v[piv]), -1, p)) % p

    def run(self, column_cands: list[np.ndarray], first: np.ndarray | None = None) -> Gamma | None:
        cols: list[np.ndarray] = []
        basis: list[tuple[int, np.ndarray]] = []

        def rec(r: int) -> bool:
            if r == self.n:
                return True
            cand = first if (r == 0 and first is not None) else column_cands[r]
            for v in self._filter(cols, cand, r):
                piv = self._independent(basis, v)
                if piv is None:
                    continue
                cols.append(v)
                basis.append(piv)
                if rec(r + 1):
                    return True
                cols.pop()
                basis.pop()
            return False

        if not rec(0):
            return None
        return [[int(cols[j][i]) for j in range(self.n)] for i in range(self.n)]


def _search_task(args: tuple) -> tuple[int, Gamma | None, int]:
    t, s, cands, first, budget, tag = args
    sr = _Searcher(t, s, budget)
    return tag, sr.run(cands, first), sr.spent


def _run_tasks(tasks: list[tuple], workers: int) -> Gamma | None:
    """Run ordered tasks; return the hit of the lowest-tagged successful task."""
    if workers <= 1 or len(tasks) <= 1:
        for task in tasks:
            _, hit, _ = _search_task(task)
            if hit is not None:
                return hit
        return None
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = sorted(pool.map(_search_task, tasks), key=lambda x: x[0])
    for _, hit, _ in results:
        if hit is not None:
            return hit
    return None


def _chunks(arr: np.ndarray, parts: int) -> list[np.ndarray]:
    parts = max(1, min(parts, len(arr)))
    return [c for c in np.array_split(arr, parts) if len(c)]


def _require_finite(spec: FieldSpec) -> int:
    if not spec.is_finite:
        raise FieldNotEnumerable(f"cannot enumerate Gamma over {spec}")
    return spec.order


def search_pruned(
    t: Sltm, s: Sltm, shapes: Sequence[GammaShape], budget: int = DEFAULT_BUDGET, workers: int = 1
) -> Gamma | None:
    """First Gamma (by shape index, then column-major value order) solving the key condition."""
    _check_pair(t, s)
    p = _require_finite(t.spec)
    n = t.n
    tasks = []
    for idx, shape in enumerate(shapes):
        cands = []
        for j in range(1, n + 1):
            allowed = [
                "n" if (i, j) in shape.nonzero_positions else "f" if (i, j) in shape.free_positions else "z"
                for i in range(1, n + 1)
            ]
            cands.append(_column_candidates(p, n, allowed))
        for c_idx, chunk in enumerate(_chunks(cands[0], workers)):
            tasks.append((t, s, cands, chunk, budget, (idx, c_idx)))
    return _run_tasks(tasks, workers)


def search_full(t: Sltm, s: Sltm, budget: int = DEFAULT_BUDGET, workers: int = 1) -> Gamma | None:
    """Exhaustive search over all invertible Gamma (column-major lexicographic order).

    The identity is probed first, so equal inputs return it.
    """
    _check_pair(t, s)
    p = _require_finite(t.spec)
    n = t.n
    ident = identity_gamma(n, t.spec)
    if satisfies_key_condition(t, s, ident):
        return ident
    full = _column_candidates(p, n, ["f"] * n)
    cands = [full] * n
    tasks = [(t, s, cands, chunk, budget, (0, c)) for c, chunk in enumerate(_chunks(full, workers))]
    return _run_tasks(tasks, workers)


# decision pipeline


@dataclass
class IsoVerdict:
    kind: str
    witness: dict[str, Any] = field(default_factory=dict)
    gamma: Gamma | None = None
    gamma_relates: str | None = None  # "inputs" or "reduced_forms"
    left_log: EtoLog | None = None
    right_log: EtoLog | None = None
    left_reduced: Sltm | None = None
    right_reduced: Sltm | None = None
    reason: str | None = None
    spec: FieldSpec | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"verdict": self.kind}
        if self.kind == NON_ISOMORPHIC:
            out["witness"] = self.witness
        elif self.kind == UNKNOWN:
            out["reason"] = self.reason
        else:
            if self.gamma is not None and self.spec is not None:
                out["gamma"] = gamma_to_strings(self.gamma, self.spec)
                out["gamma_relates"] = self.gamma_relates
            if self.witness:
                out["certificate"] = self.witness
            if self.left_log is not None and self.right_log is not None:
                out["left_log"] = self.left_log.to_records()
                out["right_log"] = self.right_log.to_records()
        return out


def verify_verdict(t: Sltm, s: Sltm, v: IsoVerdict) -> bool:
    """Re-check an Isomorphic certificate from scratch."""
    if v.kind != ISOMORPHIC:
        return False
    if v.witness.get("kind") == "zero_class":
        return in_zero_class(t) and in_zero_class(s)
    if v.gamma_relates == "inputs":
        return v.gamma is not None and is_isomorphism(t, s, v.gamma)
    if v.left_log is None or v.right_log is None:
        return False
    lt, rs = v.left_log.replay(t), v.right_log.replay(s)
    if lt != v.left_reduced or rs != v.right_reduced:
        return False
    if v.gamma is None:
        return lt == rs
    return is_isomorphism(lt, rs, v.gamma)


def _mdict(m) -> list[dict]:
    return [mm.to_dict() for mm in m]


def decide(
    t: Sltm, s: Sltm, budget: int = DEFAULT_BUDGET, workers: int = 1, full_search: bool = False
) -> IsoVerdict:
    """Zero class, W-test, M-test, (I,J)-test, identical forms, then pruned search."""
    _check_pair(t, s)
    zt, zs = in_zero_class(t), in_zero_class(s)
    if zt and zs:
        return IsoVerdict(ISOMORPHIC, {"kind": "zero_class"})
    if zt != zs:
        return IsoVerdict(NON_ISOMORPHIC, {"kind": "zero_class", "left": zt, "right": zs})
    one_t, one_s = reduce_1ref(t).reduced, reduce_1ref(s).reduced
    wt, ws = compute_wall(one_t), compute_wall(one_s)
    if wt != ws:
        return IsoVerdict(NON_ISOMORPHIC, {"kind": "wall", "left": list(wt), "right": list(ws)})
    rt, rs = reduce_2ref(t), reduce_2ref(s)
    vt, vs = rt.reduced, rs.reduced
    mt, ms = measure_sequence_of_2ref(vt), measure_sequence_of_2ref(vs)
    if mt != ms:
        return IsoVerdict(NON_ISOMORPHIC, {"kind": "measure_sequence", "left": _mdict(mt), "right": _mdict(ms)})
    shapes = gamma_shapes(vt, vs)
    if not shapes:
        return IsoVerdict(NON_ISOMORPHIC, {"kind": "ij_sets", "wall": list(wt)})
    common = dict(left_log=rt.log, right_log=rs.log, left_reduced=vt, right_reduced=vs)
    if vt == vs:
        return IsoVerdict(ISOMORPHIC, {"kind": "eto_logs"}, **common)
    if not t.spec.is_finite:
        return IsoVerdict(UNKNOWN, reason="invariants agree; no enumeration over an infinite field")
    if full_search:
        gamma = search_full(t, s, budget, workers)
        if gamma is None:
            return IsoVerdict(NON_ISOMORPHIC, {"kind": "exhausted_full_search"})
        return IsoVerdict(ISOMORPHIC, {"kind": "gamma"}, gamma=gamma, gamma_relates="inputs", spec=t.spec)
    gamma = search_pruned(vt, vs, shapes, budget, workers)
    if gamma is None:
        return IsoVerdict(NON_ISOMORPHIC, {"kind": "exhausted_search", "shapes": len(shapes)})
    relates = "inputs" if (vt == t and vs == s) else "reduced_forms"
    return IsoVerdict(ISOMORPHIC, {"kind": "gamma"}, gamma=gamma, gamma_relates=relates, spec=t.spec, **common)
