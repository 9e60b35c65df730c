"""Hypothesis strategies shared by the test modules."""

from __future__ import annotations

from hypothesis import strategies as st

from ntinv.eto import F, P, Q, apply, f_violation, q_admissible, ANY
from ntinv.errors import QPreconditionViolated
from ntinv.field import FieldSpec
from ntinv.sltm import Sltm

FIELDS = [FieldSpec.gf(3), FieldSpec.gf(5)]


@st.composite
def sltms(draw, fields=FIELDS, min_n=2, max_n=5, density=None):
    spec = draw(st.sampled_from(fields))
    n = draw(st.integers(min_n, max_n))
    rows = [[]]
    for r in range(2, n + 1):
        rows.append([draw(st.integers(0, spec.order - 1)) for _ in range(r - 1)])
    return Sltm(n, spec, rows)


def admissible_etos(t: Sltm) -> list:
    """Every admissible ETO on ``t`` (P with all alphas, F, Q with its admissible betas)."""
    f = t.spec
    out = []
    for r in range(1, t.n + 1):
        out.extend(P(r, a) for a in f.nonzero())
    for r1 in range(1, t.n + 1):
        for r2 in range(r1 + 1, t.n + 1):
            if f_violation(t, r1, r2) is None:
                out.append(F(r1, r2))
    for r0 in range(2, t.n + 1):
        for k0 in range(1, r0):
            try:
                b = q_admissible(t, r0, k0)
            except QPreconditionViolated:
                continue
            if b is ANY:
                out.extend(Q(r0, k0, x) for x in f.nonzero())
            elif b is not None:
                out.append(Q(r0, k0, b))
    return out


@st.composite
def eto_chains(draw, t: Sltm, max_len: int = 5):
    ops = []
    cur = t
    for _ in range(draw(st.integers(0, max_len))):
        cands = admissible_etos(cur)
        op = draw(st.sampled_from(cands))
        ops.append(op)
        cur = apply(cur, op)
    return ops, cur
