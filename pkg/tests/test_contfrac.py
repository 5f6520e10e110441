import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st
from mpmath import mp

from lowerspec.cf.contfrac import (ContinuedFraction, RationalInterval, convergents,
                                   coset_distance_ratios, dist_coset, eval_enclosure,
                                   expand_interval)
from lowerspec.errors import AmbiguousCoset, DepthExceeded, InvalidQuotient

GOLDEN = ContinuedFraction(0, (1,) * 30)
SQRT2 = ContinuedFraction(1, (2,) * 30)

quotients_st = st.lists(st.integers(1, 50), min_size=1, max_size=12)


def test_fibonacci_convergents():
    cf = convergents(0, [1, 1, 1, 1, 1])
    assert [cf.convergent(k) for k in range(6)] == [Fraction(x) for x in
                                                    ("0", "1", "1/2", "2/3", "3/5", "5/8")]
    assert cf.convergents[:2] == [(1, 0), (0, 1)]


def test_sqrt2_convergents():
    cf = convergents(1, [2, 2, 2])
    assert [cf.convergent(k) for k in range(4)] == [Fraction(1), Fraction(3, 2), Fraction(7, 5),
                                                    Fraction(17, 12)]


@pytest.mark.parametrize("cf, exact", [(GOLDEN, "(sqrt(5)-1)/2"), (SQRT2, "sqrt(2)")])
def test_convergent_error_bound(cf, exact):
    with mp.workdps(80):
        x = mp.mpmathify(eval(exact, {"sqrt": mp.sqrt}))
        for n in range(25):
            assert abs(cf.q(n) * x - cf.p(n)) < mp.mpf(1) / cf.q(n + 1)


def test_invalid_quotient_and_depth():
    with pytest.raises(InvalidQuotient):
        ContinuedFraction(0, (1, 0, 2))
    with pytest.raises(DepthExceeded):
        GOLDEN.q(31)
    with pytest.raises(DepthExceeded):
        eval_enclosure(GOLDEN, 0)


def test_enclosure_examples():
    enc = eval_enclosure(ContinuedFraction(0, (1, 1, 1, 1)), 4)
    assert (enc.lo, enc.hi) == (Fraction(3, 5), Fraction(2, 3))
    cf = ContinuedFraction(1, (2, 2, 2, 2))
    assert cf.q(4) == 29
    # consecutive convergents are 1/(q_3 q_4) apart; the mediant form is below 1/q_4^2
    assert eval_enclosure(cf, 4).width == Fraction(1, 12 * 29)
    assert eval_enclosure(cf, 4, tight=True).width < Fraction(1, 29 ** 2)
    with mp.workdps(50):
        g = (mp.sqrt(5) - 1) / 2
        enc = eval_enclosure(GOLDEN, 20, tight=True)
        assert mp.mpf(enc.lo.numerator) / enc.lo.denominator <= g <= \
            mp.mpf(enc.hi.numerator) / enc.hi.denominator


@given(st.integers(-5, 5), quotients_st, quotients_st)
def test_enclosure_contains_every_extension(a0, head, tail):
    cf = ContinuedFraction(a0, tuple(head))
    full = cf.extended(tail)
    x = full.convergent(full.depth)
    for tight in (False, True):
        assert eval_enclosure(cf, cf.depth, tight=tight).contains(x)


@given(quotients_st, st.integers(0, 10 ** 6))
def test_index_for(qs, n):
    cf = ContinuedFraction(0, tuple(qs))
    assume(n < cf.q(cf.depth))
    j = cf.index_for(n)
    if n == 0:
        assert j == -1
    else:
        assert cf.q(j) <= n < cf.q(j + 1)


def test_dist_coset_examples():
    exact = RationalInterval(Fraction(2, 3), Fraction(2, 3))
    assert dist_coset(3, GOLDEN, 1, 5, enclosure=exact) == RationalInterval(1, 1)
    for a in (1, 2, -2, 4):
        d = dist_coset(0, GOLDEN, a, 5)
        assert d.lo == d.hi == min(abs(a) % 5, 5 - abs(a) % 5)


def test_dist_coset_golden_shrinks():
    for k in range(2, 20):
        d = dist_coset(GOLDEN.q(k), GOLDEN, 0, 1)
        assert d.hi < Fraction(1, GOLDEN.q(k + 1))
        assert d.lo > Fraction(1, 2 * GOLDEN.q(k + 1))


@given(st.integers(-5, 5), quotients_st)
def test_convergent_invariants(a0, qs):
    cf = convergents(a0, qs)
    for k in range(-1, cf.depth + 1):
        assert math.gcd(cf.p(k), cf.q(k)) == 1
        if k >= 1:
            assert cf.q(k) ** 2 >= 2 ** (k - 1)  # q_k >= 2^((k-1)/2)
        if k >= 2:
            assert cf.q(k) > cf.q(k - 1)
        if k >= 0:
            assert cf.p(k) * cf.q(k - 1) - cf.p(k - 1) * cf.q(k) == (-1) ** (k + 1)


@given(st.integers(0, 10_000), st.integers(-20, 20), st.integers(1, 13), quotients_st)
def test_dist_coset_nested_in_depth(n, a, b, qs):
    cf = convergents(0, qs)
    deepest = dist_coset(n, cf, a, b, enclosure=RationalInterval.of(
        cf.convergent(cf.depth), cf.convergent(cf.depth)))
    prev = None
    for d in range(1, cf.depth + 1):
        try:
            iv = dist_coset(n, cf, a, b, d)
        except AmbiguousCoset:
            continue
        assert iv.contains_interval(deepest)
        if prev is not None:
            assert prev.contains_interval(iv)
        prev = iv


def test_dist_coset_ambiguous():
    # 1/2 sits at the midpoint between 0 and 1
    wide = RationalInterval(Fraction(2, 5), Fraction(3, 5))
    with pytest.raises(AmbiguousCoset):
        dist_coset(1, GOLDEN, 0, 1, enclosure=wide)
    around = RationalInterval(Fraction(-1, 10), Fraction(1, 10))
    assert dist_coset(1, GOLDEN, 0, 1, enclosure=around) == RationalInterval(0, Fraction(1, 10))


@given(st.integers(0, 2000), st.integers(-6, 6), st.sampled_from([5, 7, 13]), quotients_st)
def test_integer_ratio_path_matches_fractions(n, a, b, qs):
    cf = ContinuedFraction(0, tuple(qs) + (3, 4, 5))
    M = cf.depth
    enc = eval_enclosure(cf, M, tight=True)
    ends = ((cf.p(M), cf.q(M)), (cf.p(M) + cf.p(M - 1), cf.q(M) + cf.q(M - 1)))
    try:
        ref = dist_coset(n, cf, a, b, enclosure=enc)
    except AmbiguousCoset:
        with pytest.raises(AmbiguousCoset):
            coset_distance_ratios(n, *ends, a, b)
        return
    (ln, ld), (hn, hd) = coset_distance_ratios(n, *ends, a, b)
    assert (Fraction(ln, ld), Fraction(hn, hd)) == (ref.lo, ref.hi)


def test_expand_interval():
    enc = eval_enclosure(SQRT2, 10, tight=True)
    terms = [bk for _, bk in expand_interval(enc)]
    assert terms[:9] == [1] + [2] * 8
    assert len(terms) <= 11


def test_json_round_trip():
    cf = ContinuedFraction(-3, (7, 10 ** 40, 2))
    assert ContinuedFraction.from_json(cf.to_json()) == cf
    iv = RationalInterval(Fraction(1, 3), Fraction(5, 7))
    assert RationalInterval.from_json(iv.to_json()) == iv
