from fractions import Fraction
from math import isqrt

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from rcspace.errors import DomainError
from rcspace.exact import (Interval, Q, RootExpr, enclose, format_rational,
                           parse_rational, sign_of, sqrt_bounds)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=97).map(
    lambda f: mpq(f.numerator, f.denominator))
nonneg = st.fractions(min_value=0, max_value=50, max_denominator=97).map(
    lambda f: mpq(f.numerator, f.denominator))


@pytest.mark.parametrize("a,b,d,expected", [(0, 0, 2, 0), (-1, 1, 2, 1), (3, -2, 2, 1),
                                            (1, -1, 1, 0), (-3, 2, 2, -1)])
def test_sign_of_examples(a, b, d, expected):
    assert sign_of(RootExpr(a, b, d)) == expected


def test_sign_of_negative_radicand():
    with pytest.raises(DomainError):
        sign_of(RootExpr(1, 1, -2))


@given(rationals, rationals, st.integers(0, 40), st.integers(1, 40))
def test_sign_of_matches_rational_eval_on_squares(a, b, num, den):
    # sqrt(num²/den²) = num/den, so the value is exactly rational
    d = mpq(num * num, den * den)
    value = a + b * mpq(num, den)
    assert sign_of(RootExpr(a, b, d)) == (value > 0) - (value < 0)


def test_enclose_examples():
    assert enclose(RootExpr(0, 1, 4), 10) == Interval(2, 2)
    iv = enclose(RootExpr(0, 1, 2), 100)
    assert iv.width <= mpq(1, 100)
    # integer square root oracle: 141 < 100·sqrt(2) < 142
    assert iv.lo * iv.lo <= 2 <= iv.hi * iv.hi
    assert mpq(141, 100) <= iv.hi and iv.lo <= mpq(142, 100)
    neg = enclose(RootExpr(1, -1, 2), 100)
    assert neg.hi < 0 and neg.width <= mpq(1, 100)


@given(rationals, rationals, nonneg, st.integers(1, 10 ** 6), rationals)
@settings(max_examples=300)
def test_enclose_respects_sign_probes(a, b, d, precision, r):
    e = RootExpr(a, b, d)
    iv = enclose(e, precision)
    assert iv.width <= mpq(1, precision)
    s = sign_of(RootExpr(a - r, b, d))
    if s < 0:
        assert iv.lo < r
    elif s > 0:
        assert iv.hi > r
    else:
        assert iv.lo <= r <= iv.hi


@given(rationals, rationals, nonneg)
def test_enclose_nested(a, b, d):
    e = RootExpr(a, b, d)
    coarse, fine = enclose(e, 16), enclose(e, 1 << 20)
    assert coarse.lo <= fine.lo and fine.hi <= coarse.hi


@given(rationals, rationals, rationals, rationals, st.floats(0, 1), st.floats(0, 1))
def test_interval_arithmetic_contains_exact_results(a, b, c, d, s, t):
    x, y = Interval(min(a, b), max(a, b)), Interval(min(c, d), max(c, d))
    # points inside each interval
    p = x.lo + (x.hi - x.lo) * Q(Fraction(s).limit_denominator(64))
    q = y.lo + (y.hi - y.lo) * Q(Fraction(t).limit_denominator(64))
    assert (x + y).contains(p + q)
    assert (x - y).contains(p - q)
    assert (x * y).contains(p * q)


def test_round_out_keeps_containment():
    iv = Interval(mpq(1, 3), mpq(2, 3)).round_out(10)
    assert iv == Interval(mpq(3, 10), mpq(7, 10))


def test_sqrt_bounds_bracket():
    for r in (mpq(2), mpq(1, 3), mpq(10 ** 6 + 1, 7)):
        lo, hi = sqrt_bounds(r, 1 << 30)
        assert lo * lo <= r <= hi * hi
        assert hi - lo <= mpq(1, 1 << 30)
    assert sqrt_bounds(mpq(9, 4), 8) == (mpq(3, 2), mpq(3, 2))
    assert isqrt(2) == 1  # sanity of the oracle library


@pytest.mark.parametrize("text,value", [("3", mpq(3)), ("-2/4", mpq(-1, 2)), ("+7/1", mpq(7))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value
    assert parse_rational(format_rational(value)) == value


@pytest.mark.parametrize("text", ["1.5", "1/0", "a", "1//2", "", "1/-2"])
def test_parse_rational_rejects(text):
    with pytest.raises(DomainError):
        parse_rational(text)


def test_q_rejects_float():
    with pytest.raises(DomainError):
        Q(0.5)


def test_mixed_radicands_rejected():
    with pytest.raises(DomainError):
        RootExpr(0, 1, 2) + RootExpr(0, 1, 3)
