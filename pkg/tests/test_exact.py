import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st
from mpmath import mp

from lowerspec.cf.exact import (ceil_power_over, ceil_rational_power, compare_products,
                                iroot_ceil, iroot_floor, log_rational, root_lower_bound, round_down,
                                round_up)

pos_frac = st.fractions(min_value=Fraction(1, 10 ** 6), max_value=10 ** 6).filter(lambda x: x > 0)
small_exp = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def test_ceil_rational_power_examples():
    assert ceil_rational_power(20, 6, 3) == 400
    assert ceil_rational_power(2, 3, 2) == 3
    # 10^(7/3) = 215.44...; 215^3 < 10^7 <= 216^3
    assert ceil_rational_power(10, 7, 3) == 216
    assert 215 ** 3 < 10 ** 7 <= 216 ** 3


@given(st.integers(0, 10 ** 60), st.integers(1, 12))
def test_iroot(x, k):
    y = iroot_floor(x, k)
    assert y ** k <= x < (y + 1) ** k
    z = iroot_ceil(x, k)
    assert z ** k >= x and (z == 0 or (z - 1) ** k < x)


@given(st.integers(1, 1000), st.integers(0, 30), st.integers(1, 10))
def test_ceil_rational_power_property(x, p, q):
    y = ceil_rational_power(x, p, q)
    assert y ** q >= x ** p and (y - 1) ** q < x ** p


def test_ceil_power_over():
    # ceil(20^2 / 5) = 80
    assert ceil_power_over(Fraction(20), Fraction(6, 3), 5) == 80
    assert ceil_power_over(Fraction(7, 2), Fraction(3, 2), 1) == math.ceil(3.5 ** 1.5)


@given(pos_frac, st.integers(8, 200))
def test_rounding_brackets(x, bits):
    lo, hi = round_down(x, bits), round_up(x, bits)
    assert lo <= x <= hi
    assert (hi - lo) <= x / 2 ** (bits - 2)
    for r in (lo, hi):
        assert r.denominator & (r.denominator - 1) == 0  # dyadic


def _mp_log(terms):
    return sum(mp.mpf(e.numerator) / e.denominator * mp.log(mp.mpf(b.numerator) / b.denominator)
               for b, e in terms)


@given(st.lists(st.tuples(pos_frac, small_exp), min_size=1, max_size=3),
       st.lists(st.tuples(pos_frac, small_exp), min_size=1, max_size=3),
       st.sampled_from([0, 10 ** 6]))
def test_compare_products_matches_highprec(lhs, rhs, budget):
    with mp.workdps(60):
        diff = _mp_log(lhs) - _mp_log(rhs)
    assume(abs(diff) > mp.mpf(10) ** -40)
    # budget 0 forces the interval-logarithm path, 10**6 the exact integer path
    assert compare_products(lhs, rhs, bit_budget=budget) == (diff > 0)


def test_compare_products_equality_strictness():
    lhs = [(Fraction(4), Fraction(1, 2))]
    rhs = [(Fraction(2), Fraction(1))]
    assert not compare_products(lhs, rhs)
    assert compare_products(lhs, rhs, strict=False)


def test_compare_products_huge():
    # 2002^(1/6) > 20^(1/3) <=> 2002 > 400, and the same at 10^5-bit scale
    assert compare_products([(2002, Fraction(1, 6))], [(20, Fraction(1, 3))])
    big = 3 ** 60000
    assert compare_products([(big + 1, Fraction(1, 7))], [(big, Fraction(1, 7))])
    assert not compare_products([(big, Fraction(1, 10 ** 30 + 1))], [(big, Fraction(1, 10 ** 30))])


def test_log_rational_encloses():
    iv = log_rational(Fraction(10 ** 50 + 3, 7), 128)
    with mp.workdps(80):
        true = mp.log(mp.mpf(10 ** 50 + 3) / 7)
    assert iv.a <= true <= iv.b


@given(pos_frac, st.integers(1, 2000))
def test_root_lower_bound(x, k):
    r = root_lower_bound(x, k)
    assert 0 < r
    assert r ** k <= x if k <= 50 else compare_products([(x, 1)], [(r, k)], strict=False)


tiny_exp = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@given(st.lists(st.tuples(pos_frac, tiny_exp), min_size=1, max_size=3),
       st.lists(st.tuples(pos_frac, tiny_exp), min_size=1, max_size=3))
def test_exact_and_log_paths_agree(lhs, rhs):
    with mp.workdps(60):
        diff = _mp_log(lhs) - _mp_log(rhs)
    assume(abs(diff) > mp.mpf(10) ** -40)
    assert compare_products(lhs, rhs) == compare_products(lhs, rhs, bit_budget=0) == (diff > 0)
