from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from robustlrs.interval import Ival, Box, imin
from robustlrs.qmath import (parse_rational, format_rational, round_down,
                             round_up, sqrt_down, sqrt_up, exact_sqrt)

rationals = st.fractions(min_value=-100, max_value=100, max_denominator=1000)


def test_parse_format_roundtrip():
    for s in ["3/4", "-7/2", "5", "0", "-12"]:
        assert format_rational(parse_rational(s)) == s
    with pytest.raises(ValueError):
        parse_rational("1/-2")
    with pytest.raises(ValueError):
        parse_rational("1/0")


@given(rationals)
def test_dyadic_rounding_brackets(x):
    lo, hi = round_down(x, 20), round_up(x, 20)
    assert lo <= x <= hi
    assert hi - lo <= Q(2, 1 << 20)


@given(st.fractions(min_value=0, max_value=10000, max_denominator=997))
def test_sqrt_bounds(x):
    lo, hi = sqrt_down(x, 40), sqrt_up(x, 40)
    assert lo * lo <= x <= hi * hi
    assert hi - lo <= Q(2, 1 << 40) + Q(1, 1 << 30)


def test_exact_sqrt():
    assert exact_sqrt(Q(9, 4)) == Q(3, 2)
    with pytest.raises(ValueError):
        exact_sqrt(Q(2))


@given(rationals, rationals, rationals, rationals)
def test_containment_add_mul(a, b, c, d):
    # x in [min(a,b), max(a,b)], y in [min(c,d), max(c,d)]
    X = Ival(min(a, b), max(a, b))
    Y = Ival(min(c, d), max(c, d))
    for x in (X.lo, X.hi, X.mid):
        for y in (Y.lo, Y.hi, Y.mid):
            assert (X + Y).contains(x + y)
            assert (X - Y).contains(x - y)
            assert (X * Y).contains(x * y)


@given(rationals, rationals)
def test_box_mul_containment(a, b):
    w = Ival(a - 1, a + 1)
    z = Ival(b - 1, b + 1)
    bx = Box(w, z)
    sq = bx * bx
    # the exact square of the corner point stays inside
    re, im = a - 1, b + 1
    assert sq.contains(re * re - im * im, 2 * re * im)


def test_interval_misc():
    x = Ival(Q(-2), Q(3))
    assert x.abs().lo == 0 and x.abs().hi == 3
    assert x.sq().lo == 0 and x.sq().hi == 9
    assert imin(Ival(Q(1), Q(5)), Ival(Q(2), Q(3))).lo == 1
    assert imin(Ival(Q(1), Q(5)), Ival(Q(2), Q(3))).hi == 3
    with pytest.raises(ZeroDivisionError):
        x.inverse()
    assert Ival(Q(1), Q(2)).inverse().lo == Q(1, 2)


def test_box_pow_matches_exact():
    # (3+4i)/5 is on the unit circle; cube it exactly
    b = Box.point(Q(3, 5), Q(4, 5))
    p3 = b.pow(3)
    assert p3.contains(Q(-117, 125), Q(44, 125))
    pm1 = b.pow(-1)
    assert pm1.contains(Q(3, 5), Q(-4, 5))


def test_sign():
    assert Ival(Q(1), Q(2)).sign() == 1
    assert Ival(Q(-2), Q(-1)).sign() == -1
    assert Ival(Q(0), Q(0)).sign() == 0
    assert Ival(Q(-1), Q(1)).sign() is None
