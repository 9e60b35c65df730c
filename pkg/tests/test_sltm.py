import pytest
from hypothesis import given

from ntinv.errors import IndexOrderViolation, IndexOutOfRange, ParseError, SizeMismatch
from ntinv.sltm import Sltm, SubmatrixRange, format_sltm, parse_sltm
from worked_examples import GF5, Q, RED_T1_SHIFTED, RED_T3, REF2_1_T, WALLS_S, mat
from strategies import sltms


def test_leader():
    assert RED_T1_SHIFTED.leader(4) == 3
    assert RED_T3.leader(2) == 1
    assert RED_T3.leader(5) == 0
    with pytest.raises(IndexOutOfRange):
        RED_T3.leader(6)


def test_delta():
    assert RED_T1_SHIFTED.delta(2, 1, 3, 4).value == 0
    assert Sltm.zero(4, Q).delta(3, 1, 2, 3).value == 0
    t = mat(3, {2: (1,), 3: (1, 1)})
    assert t.delta(2, 1, 2, 3).value == 3
    with pytest.raises(IndexOrderViolation):
        t.delta(2, 2, 1, 3)


def test_row_measure():
    assert REF2_1_T.row_measure(5, (3, 4)) == 1
    assert REF2_1_T.row_measure(2) == 0
    assert REF2_1_T.row_measure(6) == 2
    assert mat(4, {4: (1, 2, 3)}).row_measure(4, (1, 3)) == 3


def test_submatrix():
    assert WALLS_S.submatrix((3, 4), (1, 2)) == [[1, 1], [2, 2]]
    assert WALLS_S.submatrix(SubmatrixRange((5, 5), (4, 4))) == [[3]]
    assert REF2_1_T.submatrix((5, 6), (3, 4)) == [[0, 1], [3, 3]]


def test_parse_format_roundtrip():
    text = "# comment\nfield gf 5\nn 4\n1\n2 3\n0 0 4\n"
    t = parse_sltm(text)
    assert t.spec == GF5 and t.n == 4 and t.t(4, 3) == 4
    assert parse_sltm(format_sltm(t)) == t


def test_parse_errors_carry_location():
    with pytest.raises(ParseError) as e:
        parse_sltm("field rational\nn 3\n1\n1 x\n", "m.sltm")
    assert "m.sltm:4" in str(e.value)
    with pytest.raises(ParseError) as e:
        parse_sltm("field rational\nn 3\n1\n1 2 3\n", "m.sltm")
    assert "m.sltm:4" in str(e.value)
    with pytest.raises(ParseError):
        parse_sltm("field gf 4\nn 2\n1\n")
    with pytest.raises(ParseError):
        parse_sltm("field gf 5\nn 2\n1/2\n")


def test_shape_errors():
    with pytest.raises(SizeMismatch):
        Sltm(3, Q, [[], [1], [1]])


@given(sltms())
def test_leader_zero_iff_measure_zero(t):
    for r in range(1, t.n + 1):
        assert (t.leader(r) == 0) == (t.row_measure(r) == 0)


@given(sltms())
def test_text_roundtrip(t):
    assert parse_sltm(format_sltm(t)) == t
