from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinsusy.halfint import HalfInt, half, ladder


@pytest.mark.parametrize(
    "text, twice",
    [("3/2", 3), ("-1/2", -1), ("2", 4), (".5", 1), ("1.5", 3), (" 5 / 2 ", 5), ("0", 0), ("4/4", 2)],
)
def test_parse(text, twice):
    assert HalfInt.parse(text).twice == twice


@pytest.mark.parametrize("text", ["2/3", "1/0", "abc", "0.25", ""])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        HalfInt.parse(text)


def test_coerce_variants():
    assert HalfInt.coerce(2) == HalfInt(4)
    assert HalfInt.coerce(1.5) == HalfInt(3)
    assert HalfInt.coerce(Fraction(-3, 2)) == HalfInt(-3)
    assert HalfInt.coerce(HalfInt(7)) == HalfInt(7)
    with pytest.raises(TypeError):
        HalfInt.coerce(True)
    with pytest.raises(ValueError):
        HalfInt.coerce(0.3)
    with pytest.raises(TypeError):
        HalfInt(1.0)


def test_floor_is_mathematical():
    assert HalfInt(-1).floor() == -1
    assert HalfInt(1).floor() == 0
    assert HalfInt(-4).floor() == -2


def test_int_only_for_integers():
    assert int(HalfInt(6)) == 3
    with pytest.raises(ValueError):
        int(HalfInt(3))


def test_str_and_json_roundtrip():
    assert str(half(5)) == "5/2"
    assert str(half(-4)) == "-2"
    assert HalfInt.from_json(half(-7).to_json()) == half(-7)


def test_ladder():
    assert [str(v) for v in ladder(half(3))] == ["3/2", "1/2", "-1/2", "-3/2"]
    assert [str(v) for v in ladder(HalfInt(4), HalfInt(0))] == ["2", "1", "0"]


@given(st.integers(-200, 200), st.integers(-200, 200))
def test_arithmetic_matches_fractions(a, b):
    x, y = HalfInt(a), HalfInt(b)
    assert (x + y).as_fraction() == x.as_fraction() + y.as_fraction()
    assert (x - y).as_fraction() == x.as_fraction() - y.as_fraction()
    assert (-x).as_fraction() == -x.as_fraction()
    assert (x < y) == (x.as_fraction() < y.as_fraction())
    assert HalfInt.parse(str(x)) == x
    assert (x + 1).twice == a + 2
    assert (1 - x).twice == 2 - a
