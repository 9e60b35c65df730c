"""Independent brute-force oracles used to cross-check the search module."""

from __future__ import annotations

from itertools import product

from ntinv.algebra import determinant, is_homomorphism
from ntinv.sltm import Sltm


def _column_ok(t: Sltm, s: Sltm, cols: list[tuple[int, ...]]) -> bool:
    """Coefficient test for ``X_r^2 = sum_j t_rj X_j X_r`` restricted to the newest column."""
    p = t.spec.order
    r = len(cols)
    g = cols[-1]
    n = t.n
    # image of X_r^2 - sum_j t_rj X_j X_r, as a quadratic form in Y, reduced mod the relations of S
    quad: dict[tuple[int, int], int] = {}

    def add_prod(a: tuple[int, ...], b: tuple[int, ...], c: int) -> None:
        for i in range(n):
            if a[i] == 0:
                continue
            for k in range(n):
                if b[k] == 0:
                    continue
                v = c * a[i] * b[k]
                if i == k:
                    # Y_i^2 = sum_{l<i} s_il Y_l Y_i
                    for l in range(i):
                        sil = s.t(i + 1, l + 1)
                        if sil:
                            key = (l, i)
                            quad[key] = (quad.get(key, 0) + v * sil) % p
                else:
                    key = (min(i, k), max(i, k))
                    quad[key] = (quad.get(key, 0) + v) % p

    add_prod(g, g, 1)
    for j in range(1, r):
        trj = t.t(r, j)
        if trj:
            add_prod(cols[j - 1], g, -trj)
    return all(v % p == 0 for v in quad.values())


def all_isomorphisms(t: Sltm, s: Sltm) -> list[list[list[int]]]:
    """Every invertible Gamma with Gamma(X_j) = sum_i gamma_ij Y_i defining A(T) -> A(S)."""
    p, n = t.spec.order, t.n
    vecs = [v for v in product(range(p), repeat=n) if any(v)]
    out = []

    def rec(cols: list[tuple[int, ...]]) -> None:
        if len(cols) == n:
            gamma = [[cols[j][i] for j in range(n)] for i in range(n)]
            if determinant(gamma, t.spec) != 0:
                assert is_homomorphism(gamma, t, s)
                out.append(gamma)
            return
        for v in vecs:
            cols.append(v)
            if _column_ok(t, s, cols):
                rec(cols)
            cols.pop()

    rec([])
    return out
