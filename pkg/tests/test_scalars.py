from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from tanaka.scalars import (GaussianRational, I, ScalarError, as_scalar, conjugate, format_scalar, is_real,
                            parse_scalar, real_part)

fractions = st.fractions(max_denominator=50).map(lambda q: q.limit_denominator(50))
gaussians = st.builds(GaussianRational, fractions, fractions)
scalars = st.one_of(fractions, gaussians)


@pytest.mark.parametrize("text,value", [
    ("3", F(3)), ("-1/2", F(-1, 2)), ("i", GaussianRational(0, 1)), ("-i", GaussianRational(0, -1)),
    ("9/16*i", GaussianRational(0, F(9, 16))), ("1/2+3/4*i", GaussianRational(F(1, 2), F(3, 4))),
    ("2-i", GaussianRational(2, -1)),
])
def test_parse_examples(text, value):
    assert parse_scalar(text) == value


@pytest.mark.parametrize("value,text", [
    (F(3), "3"), (F(-1, 2), "-1/2"), (GaussianRational(0, -1), "-i"), (GaussianRational(0, F(9, 16)), "9/16*i"),
    (GaussianRational(1, -2), "1-2*i"), (GaussianRational(5, 0), "5"),
])
def test_format_examples(value, text):
    assert format_scalar(value) == text


@given(scalars)
def test_format_parse_round_trip(x):
    assert parse_scalar(format_scalar(x)) == x


@given(gaussians, gaussians, gaussians)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if b != 0:
        assert (a / b) * b == a


def test_i_squared():
    assert I * I == -1
    assert conjugate(I) == -I
    assert is_real(GaussianRational(2, 0)) and not is_real(I)
    assert real_part(GaussianRational(F(1, 3), 4)) == F(1, 3)


@pytest.mark.parametrize("bad", ["0.5", "x", "1/", "2**i", ""])
def test_parse_rejects(bad):
    with pytest.raises(ScalarError):
        parse_scalar(bad)


def test_as_scalar_rejects_floats_and_bools():
    with pytest.raises(ScalarError):
        as_scalar(0.5)
    with pytest.raises(ScalarError):
        as_scalar(True)
    assert as_scalar("3/4") == F(3, 4)
