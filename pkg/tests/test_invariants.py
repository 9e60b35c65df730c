import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from ntinv.errors import NotReduced, PreconditionViolated, ZeroClass
from ntinv.eto import apply_all
from ntinv.invariants import (
    DISTINGUISHED, INCONCLUSIVE, MeasureMatrix, bricks, ij_candidates, ij_sets, ij_test, invariant_report, m_test,
    measure_sequence, measure_sequence_of_2ref, tnul_trank, w_test, wall, wall_of_ref,
)
from ntinv.reduction import reduce_1ref
from ntinv.sltm import Sltm
import worked_examples as pd
from strategies import eto_chains, sltms


def mm(*pairs):
    return tuple(MeasureMatrix(tuple(r), tuple(m)) for r, m in pairs)


def test_walls():
    assert wall_of_ref(pd.WALLS_S) == (3, 5)
    assert wall_of_ref(pd.WALLS_T) == (3, 4, 6)
    assert wall_of_ref(pd.WALLS_U) == (3, 4, 5, 6)
    assert wall_of_ref(Sltm.zero(4, pd.Q)) == (0,)
    assert wall_of_ref(pd.RED_S1) == (4,)
    assert wall(pd.S_PRIME) == (3, 5)
    assert wall(pd.S_DPRIME) == (3, 5)
    assert wall(pd.ALG_T) == (5, 6, 8)
    assert wall(pd.mat(3, {2: (1,), 3: (1, 0)})) == (0,)
    with pytest.raises(NotReduced):
        wall_of_ref(pd.RED_T3)


def test_bricks():
    b = bricks(pd.WALLS_T)
    assert [(x.rows, x.cols) for x in b] == [((3, 3), (1, 2)), ((4, 5), (3, 3)), ((6, 6), (4, 5))]
    single = bricks(pd.RED_S1)
    assert [(x.rows, x.cols) for x in single] == [((4, 5), (1, 3))]
    v = bricks(pd.REF2_3_V)
    assert [x.values for x in v] == [((1, 0, 1), (1, 1, 1)), ((3, 0), (2, 2)), ((7, 6),)]
    with pytest.raises(ZeroClass):
        bricks(Sltm.zero(3, pd.Q))


def test_measure_sequences():
    assert measure_sequence_of_2ref(pd.REF2_1_T) == mm(([3], [2]), ([5, 6], [1, 2]))
    assert measure_sequence_of_2ref(pd.REF2_2_T) == mm(([5, 6], [2, 3]))
    assert measure_sequence_of_2ref(pd.REF2_3_V) == mm(([4, 5], [2, 3]), ([6, 7], [1, 2]), ([8], [2]))
    assert measure_sequence(pd.REF2_1_S) == measure_sequence(pd.REF2_1_T)
    assert measure_sequence(Sltm.zero(4, pd.Q)) == ()
    assert measure_sequence(pd.s00(0, 0)) == mm(([3], [2]), ([4], [1]))
    with pytest.raises(NotReduced):
        measure_sequence_of_2ref(pd.REF2_1_S)


def test_tnul_trank():
    assert tnul_trank(pd.TNUL_S) == (3, 3)
    assert tnul_trank(pd.TNUL_T) == (4, 2)
    assert tnul_trank(Sltm.zero(5, pd.Q)) == (5, 0)
    assert tnul_trank(pd.RED_S2) == (3, 2)


def test_ij_sets():
    assert {r: set(v) for r, v in ij_sets(pd.IJ4_T).items()} == {4: {1, 2}, 5: {1, 2}, 6: {1, 2, 3}}
    assert {r: set(v) for r, v in ij_sets(pd.IJ4_S).items()} == {4: {1, 3}, 5: {1, 3}, 6: {1, 2, 3}}


def test_w_test():
    assert w_test(pd.RP_FAILS_S, pd.WALLS_T) == DISTINGUISHED
    assert w_test(pd.WALLS_S, pd.WALLS_T) == DISTINGUISHED
    assert w_test(pd.WALLS_T, pd.WALLS_T) == INCONCLUSIVE
    assert w_test(pd.TNUL_S, pd.TNUL_T) == DISTINGUISHED


def test_m_test():
    assert m_test(pd.THEO_REF2_S, pd.THEO_REF2_T) == DISTINGUISHED
    assert m_test(pd.S_PRIME, pd.S_DPRIME) == DISTINGUISHED
    assert m_test(pd.WALLS_T, pd.WALLS_T) == INCONCLUSIVE


def test_ij_test():
    assert ij_test(pd.IJ0_T, pd.IJ0_S) == DISTINGUISHED
    assert ij_test(pd.WALLS_T, pd.WALLS_T) == INCONCLUSIVE
    cands = ij_candidates(pd.IJ4_T, pd.IJ4_S)
    assert len(cands) == 4
    for rho in cands:
        assert {rho[1], rho[3]} == {1, 2} and rho[2] == 3
    with pytest.raises(PreconditionViolated):
        ij_test(pd.REF2_1_S, pd.REF2_1_T)


def test_report_schema():
    d = invariant_report(pd.REF2_1_T).to_dict()
    assert d == {
        "wall": [3, 5],
        "measure_sequence": [{"rows": [3], "measures": [2]}, {"rows": [5, 6], "measures": [1, 2]}],
        "tnul": 2,
        "trank": 4,
        "zero_class": False,
    }


@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(sltms(max_n=5), st.data())
def test_eto_invariance(t, data):
    ops, s = data.draw(eto_chains(t))
    assert apply_all(t, ops) == s
    assert wall(s) == wall(t)
    assert measure_sequence(s) == measure_sequence(t)
    assert tnul_trank(reduce_1ref(s).reduced) == tnul_trank(reduce_1ref(t).reduced)
