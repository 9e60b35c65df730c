import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import HealthCheck, given, settings

from ntinv.algebra import determinant, gamma_from_values, identity_gamma, is_homomorphism
from ntinv.census import all_matrices
from ntinv.errors import BudgetExceeded, FieldNotEnumerable, PreconditionViolated, SizeMismatch, SpecMismatch
from ntinv.invariants import measure_sequence_of_2ref
from ntinv.iso import (
    ISOMORPHIC, NON_ISOMORPHIC, UNKNOWN, decide, gamma_shapes, is_isomorphism, residuals, satisfies_key_condition,
    search_full, search_pruned, verify_verdict,
)
from ntinv.reduction import compute_wall, in_zero_class, reduce_2ref
from ntinv.sltm import Sltm
import worked_examples as pd
from oracles import all_isomorphisms
from strategies import sltms


def test_residual_examples():
    z = Sltm.zero(4, pd.GF5)
    assert satisfies_key_condition(z, z, identity_gamma(4, pd.GF5))
    assert satisfies_key_condition(pd.WALLS_T, pd.WALLS_T, identity_gamma(6, pd.Q))
    t, s = pd.s00(0, 0), pd.s00("-1/3", 1)
    for g in (pd.S00_GAMMA_A, pd.S00_GAMMA_B):
        gamma = gamma_from_values(g, pd.Q)
        assert all(r.value == 0 for r in residuals(t, s, gamma))
        assert determinant(gamma, pd.Q) != 0
    bad = residuals(pd.square_family(1), pd.square_family(2), identity_gamma(4, pd.GF5))
    assert any(r.value != 0 for r in bad)


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(sltms(fields=[pd.GF5], max_n=4), sltms(fields=[pd.GF5], max_n=4))
def test_residuals_match_algebra(t, s):
    rng = random.Random(hash((t, s)))
    if t.n != s.n:
        s = Sltm(t.n, s.spec, [[]] + [[rng.randrange(5) for _ in range(r - 1)] for r in range(2, t.n + 1)])
    gamma = [[rng.randrange(5) for _ in range(t.n)] for _ in range(t.n)]
    assert satisfies_key_condition(t, s, gamma) == is_homomorphism(gamma, t, s)


def test_gamma_shapes_counts():
    assert len(gamma_shapes(pd.TRIANG1, pd.TRIANG1)) == 2
    assert len(gamma_shapes(pd.TRIANG2, pd.TRIANG2, use_ij=False)) == 4
    assert len(gamma_shapes(pd.TRIANG2, pd.TRIANG2)) == 2
    assert gamma_shapes(pd.IJ0_T, pd.IJ0_S) == []
    with pytest.raises(PreconditionViolated):
        gamma_shapes(pd.REF2_1_S, pd.REF2_1_T)


def test_search_pruned_s00_gf5():
    t = pd.s00(0, 0, pd.GF5)
    s = pd.s00(3, 1, pd.GF5)
    g = search_pruned(t, s, gamma_shapes(t, s))
    assert g is not None and is_isomorphism(t, s, g)
    u = pd.s00(1, 1, pd.GF5)
    assert search_pruned(t, u, gamma_shapes(t, u)) is None


def test_search_full_basics():
    t = pd.mat(3, {3: (1, 1)}, pd.GF3)
    assert search_full(t, t) == identity_gamma(3, pd.GF3)
    u = pd.mat(3, {3: (2, 2)}, pd.GF3)
    full = search_full(t, u)
    pruned = search_pruned(reduce_2ref(t).reduced, reduce_2ref(u).reduced,
                           gamma_shapes(reduce_2ref(t).reduced, reduce_2ref(u).reduced))
    assert (full is None) == (pruned is None)
    with pytest.raises(FieldNotEnumerable):
        search_full(pd.WALLS_T, pd.WALLS_T)
    with pytest.raises(BudgetExceeded):
        search_full(pd.s00(0, 0, pd.GF5), pd.s00(1, 1, pd.GF5), budget=10)


def test_decide_examples():
    v = decide(pd.mat(4, {3: (1, 1), 4: (0, 0, 1)}, pd.GF5), pd.mat(4, {3: (1, 1), 4: (-1, -1, 1)}, pd.GF5))
    assert v.kind == ISOMORPHIC
    v = decide(pd.TNUL_S, pd.TNUL_T)
    assert v.kind == NON_ISOMORPHIC and v.witness["kind"] == "wall"
    v = decide(pd.square_family(1), pd.square_family(2))
    assert v.kind == NON_ISOMORPHIC
    v = decide(pd.WALLS_S, pd.WALLS_T)
    assert v.to_dict() == {"verdict": "non_isomorphic", "witness": {"kind": "wall", "left": [3, 5], "right": [3, 4, 6]}}
    v = decide(pd.THEO_REF2_S, pd.THEO_REF2_T)
    assert v.witness["kind"] == "measure_sequence"
    v = decide(pd.IJ0_T, pd.IJ0_S)
    assert v.witness["kind"] == "ij_sets"
    v = decide(pd.square_family(2, pd.Q), pd.square_family(3, pd.Q))
    assert v.kind == UNKNOWN and "infinite" in v.reason
    v = decide(pd.REF2_1_S, pd.REF2_1_T)
    assert v.kind == ISOMORPHIC and v.witness["kind"] == "eto_logs" and verify_verdict(pd.REF2_1_S, pd.REF2_1_T, v)
    v = decide(Sltm.zero(3, pd.Q), pd.mat(3, {2: (1,), 3: (1, 0)}))
    assert v.kind == ISOMORPHIC and verify_verdict(Sltm.zero(3, pd.Q), pd.mat(3, {2: (1,), 3: (1, 0)}), v)
    with pytest.raises(SizeMismatch):
        decide(pd.WALLS_T, pd.s00(0, 0))
    with pytest.raises(SpecMismatch):
        decide(pd.s00(0, 0), pd.s00(0, 0, pd.GF5))


def test_decide_certificates_on_unreduced_inputs():
    t = pd.mat(4, {2: (1,), 3: (1, 1), 4: (0, 0, 1)}, pd.GF5)
    s = pd.mat(4, {3: (1, 1), 4: (3, 1, 1)}, pd.GF5)
    v = decide(t, s)
    assert v.kind == ISOMORPHIC and v.gamma_relates == "reduced_forms"
    assert verify_verdict(t, s, v)
    w = decide(t, s, full_search=True)
    assert w.kind == ISOMORPHIC and w.gamma_relates == "inputs" and verify_verdict(t, s, w)


def test_decide_deterministic_across_workers():
    t, s = pd.s00(0, 0, pd.GF7), pd.s00(pd.GF7.div(-1, 3), 1, pd.GF7)
    a, b = decide(t, s, workers=1), decide(t, s, workers=3)
    assert a.to_dict() == b.to_dict()


def test_s00_family_gf7():
    t = pd.s00(0, 0, pd.GF7)
    for u, v in product(range(7), repeat=2):
        s = pd.s00(u, v, pd.GF7)
        verdict = decide(t, s)
        assert (verdict.kind == ISOMORPHIC) == pd.s00_predicate(u, v, pd.GF7), (u, v)
        if verdict.kind == ISOMORPHIC:
            assert verify_verdict(t, s, verdict)


def _forms(n, spec):
    buckets = {}
    for t in all_matrices(n, spec):
        if in_zero_class(t):
            continue
        v = reduce_2ref(t).reduced
        buckets.setdefault((compute_wall(v), measure_sequence_of_2ref(v)), set()).add(v)
    return {k: sorted(vs, key=repr) for k, vs in buckets.items()}


@pytest.mark.parametrize("n,p,limit", [(3, 3, None), (3, 5, None), (4, 3, 25)])
def test_shapes_complete_against_oracle(n, p, limit):
    rng = random.Random(7)
    for forms in _forms(n, pd.FieldSpec.gf(p)).values():
        pairs = [(a, b) for a in forms for b in forms]
        if limit and len(pairs) > limit:
            pairs = rng.sample(pairs, limit)
        for a, b in pairs:
            isos = all_isomorphisms(a, b)
            shapes = gamma_shapes(a, b)
            assert all(any(sh.admits(g) for sh in shapes) for g in isos)
            assert (search_pruned(a, b, shapes) is not None) == bool(isos)


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(sltms(fields=[pd.GF3], max_n=3), sltms(fields=[pd.GF3], min_n=3, max_n=3))
def test_decide_sound_against_full_search(t, s):
    if t.n != s.n:
        return
    v = decide(t, s)
    assert (v.kind == ISOMORPHIC) == (search_full(t, s) is not None)
    if v.kind == ISOMORPHIC:
        assert verify_verdict(t, s, v)
