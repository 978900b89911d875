from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from reflexmod.scalars import GaussianRational, conj, format_scalar, make, parse_scalar

fractions = st.fractions(max_denominator=50).filter(lambda f: abs(f) < 1000)
gaussians = st.builds(make, fractions, fractions)


@pytest.mark.parametrize("text,value", [
    ("3", Fraction(3)),
    ("-7/4", Fraction(-7, 4)),
    ("0", Fraction(0)),
    (5, Fraction(5)),
])
def test_parse_rationals(text, value):
    assert parse_scalar(text) == value


@pytest.mark.parametrize("text,re,im", [
    ("i", 0, 1),
    ("-i", 0, -1),
    ("3i", 0, 3),
    ("1/2-3/4i", Fraction(1, 2), Fraction(-3, 4)),
    ("2+i", 2, 1),
])
def test_parse_gaussian(text, re, im):
    v = parse_scalar(text, "Qi")
    assert v == make(Fraction(re), Fraction(im))


@pytest.mark.parametrize("bad", ["", "1/0", "abc", "1//2", "i", "2+3i"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_scalar(bad, "Q")


def test_make_collapses_real():
    assert isinstance(make(Fraction(2), Fraction(0)), Fraction)
    assert isinstance(make(Fraction(2), Fraction(1)), GaussianRational)


@given(gaussians)
def test_format_parse_roundtrip(x):
    assert parse_scalar(format_scalar(x), "Qi") == x


@given(gaussians, gaussians, gaussians)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    if b != 0:
        assert (a / b) * b == a
    assert conj(a * b) == conj(a) * conj(b)


@given(gaussians)
def test_norm_is_real_and_nonnegative(a):
    n = a * conj(a)
    assert isinstance(n, Fraction) and n >= 0
