"""Exhaustive class counts over small prime fields, persisted reports and rational witnesses."""

from __future__ import annotations

import csv
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any

from . import __version__
from .errors import BudgetExceeded, FieldNotEnumerable, IoError, SchemaVersionMismatch, SizeMismatch
from .field import FieldSpec
from .invariants import measure_sequence_of_2ref
from .iso import DEFAULT_BUDGET, ISOMORPHIC, decide
from .reduction import compute_wall, in_zero_class, reduce_2ref
from .sltm import Sltm, format_sltm, parse_sltm

SCHEMA = 1
DEFAULT_MAX_N = 4


class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass
class ClassRecord:
    representative: Sltm
    size: int
    wall: tuple[int, ...]
    measure_sequence: list[dict]

    def to_dict(self) -> dict[str, Any]:
        return {
            "representative": format_sltm(self.representative),
            "size": self.size,
            "wall": list(self.wall),
            "measure_sequence": self.measure_sequence,
        }


@dataclass
class CensusReport:
    n: int
    q: int
    class_count: int
    classes: list[ClassRecord]
    stats: dict[str, Any] = field(default_factory=dict)
    version: str = __version__

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA,
            "version": self.version,
            "n": self.n,
            "q": self.q,
            "class_count": self.class_count,
            "classes": [c.to_dict() for c in self.classes],
            "stats": self.stats,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> CensusReport:
        classes = [
            ClassRecord(parse_sltm(c["representative"]), c["size"], tuple(c["wall"]), c["measure_sequence"])
            for c in d["classes"]
        ]
        return cls(d["n"], d["q"], d["class_count"], classes, d.get("stats", {}), d["version"])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CensusReport):
            return NotImplemented
        strip = lambda d: {k: v for k, v in d.items() if k != "stats"}  # noqa: E731
        return strip(self.to_dict()) == strip(other.to_dict())


def all_matrices(n: int, spec: FieldSpec):
    """Every SLTM of size ``n`` over a finite field, in lexicographic entry order."""
    if not spec.is_finite:
        raise FieldNotEnumerable("only finite fields can be enumerated")
    sizes = list(range(1, n))
    for flat in product(range(spec.order), repeat=n * (n - 1) // 2):
        rows, pos = [()], 0
        for k in sizes:
            rows.append(tuple(flat[pos:pos + k]))
            pos += k
        yield Sltm(n, spec, rows)


def _bucket_classes(args: tuple) -> tuple[list[list[int]], int]:
    """Union-find over the distinct reduced forms of one bucket; groups of form indices."""
    forms, budget = args
    uf = UnionFind(len(forms))
    anchors: list[int] = []
    calls = 0
    for i, v in enumerate(forms):
        for a in anchors:
            calls += 1
            if decide(forms[a], v, budget=budget).kind == ISOMORPHIC:
                uf.union(a, i)
                break
        else:
            anchors.append(i)
    groups: dict[int, list[int]] = {}
    for i in range(len(forms)):
        groups.setdefault(uf.find(i), []).append(i)
    return sorted(groups.values()), calls


def count_classes(
    n: int, spec: FieldSpec, workers: int = 1, max_n: int = DEFAULT_MAX_N, budget: int = DEFAULT_BUDGET
) -> CensusReport:
    if not spec.is_finite:
        raise FieldNotEnumerable("censuses run over finite fields only")
    if not 1 <= n <= max_n:
        raise SizeMismatch(f"n = {n} outside the configured range 1..{max_n}")
    start = time.perf_counter()
    zero_count = 0
    first_zero: Sltm | None = None
    form_size: dict[Sltm, int] = {}
    form_first: dict[Sltm, Sltm] = {}
    buckets: dict[tuple, list[Sltm]] = {}
    total = 0
    for t in all_matrices(n, spec):
        total += 1
        if in_zero_class(t):
            zero_count += 1
            first_zero = first_zero or t
            continue
        v = reduce_2ref(t).reduced
        if v not in form_size:
            form_size[v] = 0
            form_first[v] = t
            key = (compute_wall(v), measure_sequence_of_2ref(v))
            buckets.setdefault(key, []).append(v)
        form_size[v] += 1
    keys = sorted(buckets, key=lambda k: (k[0], tuple((m.rows, m.measures) for m in k[1])))
    tasks = [(buckets[k], budget) for k in keys]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_bucket_classes, tasks))
    else:
        results = [_bucket_classes(task) for task in tasks]
    classes = []
    if first_zero is not None:
        classes.append(ClassRecord(Sltm.zero(n, spec), zero_count, (0,), []))
    calls = 0
    for key, (groups, c) in zip(keys, results):
        calls += c
        forms = buckets[key]
        for g in groups:
            rep = forms[g[0]]
            size = sum(form_size[forms[i]] for i in g)
            classes.append(ClassRecord(rep, size, key[0], [m.to_dict() for m in key[1]]))
    stats = {
        "matrices": total,
        "reduced_forms": len(form_size),
        "buckets": len(keys),
        "decide_calls": calls,
        "seconds": round(time.perf_counter() - start, 3),
    }
    return CensusReport(n, spec.order, len(classes), classes, stats)


def default_cache_dir() -> str:
    return os.environ.get("NTINV_CACHE", os.path.join(os.path.expanduser("~"), ".cache", "ntinv"))


def cache_path(n: int, q: int, cache_dir: str | None = None) -> str:
    return os.path.join(cache_dir or default_cache_dir(), f"census_n{n}_q{q}_v{__version__}.json")


def save_report(r: CensusReport, path: str) -> None:
    try:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(r.to_dict(), fh, indent=1, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def load_report(path: str, n: int | None = None, q: int | None = None) -> CensusReport:
    """Load a report; refuse it if the schema, version or requested (n, q) key differ."""
    try:
        with open(path, encoding="utf-8") as fh:
            d = json.load(fh)
    except (OSError, ValueError) as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if d.get("schema") != SCHEMA or d.get("version") != __version__:
        raise SchemaVersionMismatch(f"{path}: schema {d.get('schema')} version {d.get('version')}")
    if (n is not None and d.get("n") != n) or (q is not None and d.get("q") != q):
        raise SchemaVersionMismatch(f"{path}: holds n={d.get('n')} q={d.get('q')}, wanted n={n} q={q}")
    return CensusReport.from_dict(d)


def cached_count(n: int, spec: FieldSpec, workers: int = 1, use_cache: bool = True, cache_dir: str | None = None) -> CensusReport:
    path = cache_path(n, spec.order, cache_dir)
    if use_cache and os.path.exists(path):
        try:
            return load_report(path, n, spec.order)
        except (SchemaVersionMismatch, IoError):
            pass
    r = count_classes(n, spec, workers)
    if use_cache:
        save_report(r, path)
    return r


def append_summary(r: CensusReport, path: str) -> None:
    """Append ``n, q, N`` to a CSV results table, writing the header on first use."""
    fresh = not os.path.exists(path)
    try:
        with open(path, "a", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            if fresh:
                w.writerow(["n", "q", "N"])
            w.writerow([r.n, r.q, r.class_count])
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def first_primes(k: int) -> list[int]:
    out: list[int] = []
    c = 2
    while len(out) < k:
        if all(c % p for p in out if p * p <= c):
            out.append(c)
        c += 1
    return out


def infinitude_matrix(p: int) -> Sltm:
    return Sltm.from_entries(4, FieldSpec.rationals(), {(3, 1): 1, (3, 2): 1, (4, 1): p, (4, 2): 1})


@dataclass
class Witnesses:
    parameters: list[int]
    matrices: list[Sltm]
    certificates: list[dict[str, Any]]

    def to_dict(self) -> dict[str, Any]:
        return {
            "parameters": self.parameters,
            "matrices": [format_sltm(m) for m in self.matrices],
            "certificates": self.certificates,
        }


def rational_infinitude_witnesses(k: int) -> Witnesses:
    """Pairwise non-isomorphic matrices over the rationals, one per prime, with ratio certificates."""
    if k < 2:
        raise ValueError("need at least two witnesses")
    q = FieldSpec.rationals()
    ps = first_primes(k)
    certs = []
    for i in range(k):
        for j in range(i + 1, k):
            ratio = Fraction(ps[i], ps[j])
            certs.append({"pair": [ps[i], ps[j]], "ratio": str(ratio), "is_square": q.is_square_raw(ratio)})
    return Witnesses(ps, [infinitude_matrix(p) for p in ps], certs)


__all__ = [
    "BudgetExceeded", "CensusReport", "ClassRecord", "UnionFind", "Witnesses", "all_matrices", "append_summary",
    "cache_path", "cached_count", "count_classes", "load_report", "rational_infinitude_witnesses", "save_report",
]
