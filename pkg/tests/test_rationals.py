"""Exact parsing, formatting and the unreduced-ratio helper."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from votepower.exceptions import InvalidInput
from votepower.rationals import ExactRatio, decimal_str, format_rational, parse_rational


def test_parse_accepts_common_spellings():
    assert parse_rational("3/5") == Fraction(3, 5)
    assert parse_rational("0.6") == Fraction(3, 5)
    assert parse_rational(0.6) == Fraction(3, 5)  # via repr, not binary expansion
    assert parse_rational(7) == Fraction(7)
    assert parse_rational(Fraction(2, 4)) == Fraction(1, 2)


@pytest.mark.parametrize("bad", ["abc", "1/0", "", None, True, [1]])
def test_parse_rejects_garbage(bad):
    with pytest.raises(InvalidInput):
        parse_rational(bad)


def test_format_rational():
    assert format_rational(Fraction(3, 5)) == "3/5"
    assert format_rational(Fraction(14, 7)) == "2"
    assert format_rational(Fraction(-1, 3)) == "-1/3"


def test_decimal_str_sig_digits():
    assert decimal_str(Fraction(1, 3)) == "0.333333333333"
    assert decimal_str(Fraction(1, 2)) == "0.5"
    assert decimal_str(0.76) == "0.76"


@given(st.fractions(max_denominator=10**6))
@settings(max_examples=200)
def test_parse_format_roundtrip(q):
    assert parse_rational(format_rational(q)) == q


def test_exact_ratio_keeps_terms_and_normalises_sign():
    a = ExactRatio(2, -6)
    assert (a.num, a.den) == (-2, 6)
    assert a == Fraction(-1, 3)
    with pytest.raises(InvalidInput):
        ExactRatio(1, 0)


def test_exact_ratio_float_is_correctly_rounded():
    assert float(ExactRatio(1, 3)) == 1 / 3
    assert float(ExactRatio(-1, 3)) == -1 / 3
    assert float(ExactRatio(10**40, 3 * 10**40)) == 1 / 3


def test_exact_ratio_hash_matches_reduced_fraction():
    assert hash(ExactRatio(2, 6)) == hash(Fraction(1, 3))
    assert ExactRatio(10, 4).as_fraction() == Fraction(5, 2)


@given(
    st.integers(-10**6, 10**6),
    st.integers(1, 10**6),
    st.integers(-10**6, 10**6),
    st.integers(1, 10**6),
)
@settings(max_examples=300)
def test_exact_ratio_comparisons_agree_with_fractions(a, b, c, d):
    x, y = ExactRatio(a, b), ExactRatio(c, d)
    fx, fy = Fraction(a, b), Fraction(c, d)
    assert (x == y) == (fx == fy)
    assert (x < y) == (fx < fy)
    assert (x <= y) == (fx <= fy)
    assert (x > fy) == (fx > fy)
    assert (x >= fy) == (fx >= fy)
