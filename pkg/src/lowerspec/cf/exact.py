"""Exact and rigorously bounded comparisons between big rational powers.

Comparisons of the form ``prod x_i^(e_i) > prod y_j^(f_j)`` (rational bases
and exponents) are decided by clearing exponent denominators and comparing
integers whenever the cleared integers stay below a bit budget.  Past the
budget the same comparison is made on logarithms with outward-rounded
interval arithmetic (mpmath.iv), doubling precision until the two sides
separate.  Neither path depends on binary floating-point rounding.
"""

from __future__ import annotations

import math
from fractions import Fraction
from contextlib import contextmanager
from typing import Iterable, Sequence, Union

from mpmath import iv

from ..errors import Inconclusive

Rational = Union[int, Fraction]
Term = tuple  # (base: Rational > 0, exponent: Rational)

EXACT_BIT_BUDGET = 200_000
LOG_START_PREC = 128
LOG_MAX_PREC = 16_384


@contextmanager
def ivprec(prec: int):
    """Temporarily set the working precision (bits) of mpmath's interval context."""
    saved = iv.prec
    iv.prec = prec
    try:
        yield
    finally:
        iv.prec = saved


def iroot_floor(x: int, k: int) -> int:
    """Largest y with y**k <= x."""
    if x < 0 or k < 1:
        raise ValueError("iroot_floor needs x >= 0 and k >= 1")
    if x < 2 or k == 1:
        return x
    y = 1 << -(-x.bit_length() // k)
    while True:
        z = ((k - 1) * y + x // y ** (k - 1)) // k
        if z >= y:
            return y
        y = z


def iroot_ceil(x: int, k: int) -> int:
    """Smallest y >= 0 with y**k >= x."""
    y = iroot_floor(x, k)
    return y if y ** k >= x else y + 1


def ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def ceil_rational_power(x: int, p: int, q: int) -> int:
    """Exact ceil(x^(p/q)) for integers x >= 1, p >= 0, q >= 1."""
    if x < 1 or p < 0 or q < 1:
        raise ValueError("ceil_rational_power needs x >= 1, p >= 0, q >= 1")
    return iroot_ceil(x ** p, q)


def ceil_power_over(base: Fraction, exponent: Fraction, divisor: int) -> int:
    """Smallest integer y with ``y >= base**exponent / divisor`` (base, exponent > 0)."""
    base, exponent = Fraction(base), Fraction(exponent)
    p, r = exponent.numerator, exponent.denominator
    v = Fraction(base.numerator ** p, base.denominator ** p)
    z = iroot_ceil(math.ceil(v), r)  # smallest integer z with z**r >= v
    return ceil_div(z, divisor)


def round_down(x: Fraction, bits: int = 128) -> Fraction:
    """Largest dyadic rational <= x with a `bits`-bit numerator (x > 0)."""
    x = Fraction(x)
    return round_down_ratio(x.numerator, x.denominator, bits)


def round_up(x: Fraction, bits: int = 128) -> Fraction:
    x = Fraction(x)
    return round_up_ratio(x.numerator, x.denominator, bits)


def round_down_ratio(num: int, den: int, bits: int = 128) -> Fraction:
    """`round_down` for ``num/den`` given as an unreduced integer ratio (no gcd taken)."""
    if num <= 0 or den <= 0:
        raise ValueError("round_down needs a positive ratio")
    shift = bits - (num.bit_length() - den.bit_length())
    if shift >= 0:
        return Fraction((num << shift) // den, 1 << shift)
    return Fraction((num // (den << -shift)) << -shift)


def round_up_ratio(num: int, den: int, bits: int = 128) -> Fraction:
    if num <= 0 or den <= 0:
        raise ValueError("round_up needs a positive ratio")
    shift = bits - (num.bit_length() - den.bit_length())
    if shift >= 0:
        return Fraction(ceil_div(num << shift, den), 1 << shift)
    return Fraction(ceil_div(num, den << -shift) << -shift)


def log_int(x: int, prec: int):
    """Interval enclosing ln(x) for a positive integer."""
    if x < 1:
        raise ValueError("log_int needs x >= 1")
    with ivprec(prec + 16):
        shift = max(0, x.bit_length() - prec)
        top = x >> shift
        if shift == 0:
            inner = iv.mpf(top)
        else:
            inner = iv.mpf([top, top + 1])
        return iv.log(inner) + shift * iv.log(2)


def log_rational(x: Rational, prec: int):
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log of non-positive number")
    with ivprec(prec + 16):
        return log_int(x.numerator, prec) - log_int(x.denominator, prec)


def log_sum(terms: Iterable[Term], prec: int):
    with ivprec(prec + 16):
        total = iv.mpf(0)
        for base, exp in terms:
            exp = Fraction(exp)
            e = iv.mpf(exp.numerator) / exp.denominator
            total += e * log_rational(base, prec)
        return total


def _cleared(terms: Sequence[Term], lcm: int):
    """Split into (numerator, denominator) integer products after raising to `lcm`."""
    num_terms, den_terms = [], []
    for base, exp in terms:
        base, exp = Fraction(base), Fraction(exp)
        e = exp.numerator * (lcm // exp.denominator)
        if e >= 0:
            num_terms.append((base.numerator, e))
            den_terms.append((base.denominator, e))
        else:
            num_terms.append((base.denominator, -e))
            den_terms.append((base.numerator, -e))
    return num_terms, den_terms


def _bits(terms) -> int:
    return sum(e * max(1, b.bit_length()) for b, e in terms)


def _product(terms) -> int:
    out = 1
    for b, e in terms:
        out *= b ** e
    return out


def compare_products(lhs: Sequence[Term], rhs: Sequence[Term], *, strict: bool = True,
                     bit_budget: int = EXACT_BIT_BUDGET) -> bool:
    """Decide ``prod lhs > prod rhs`` (or ``>=`` when not strict).

    Every term is ``(base, exponent)`` with base a positive rational and
    exponent any rational.  Raises `Inconclusive` only when the sizes force
    the logarithmic path and the two sides are equal to within
    ``2**-LOG_MAX_PREC``.
    """
    for base, _ in list(lhs) + list(rhs):
        if Fraction(base) <= 0:
            raise ValueError("bases must be positive")
    lcm = 1
    for _, exp in list(lhs) + list(rhs):
        lcm = math.lcm(lcm, Fraction(exp).denominator)
        if lcm.bit_length() > 64:
            break
    else:
        ln, ld = _cleared(lhs, lcm)
        rn, rd = _cleared(rhs, lcm)
        # lhs/rhs compared as (ln * rd) vs (rn * ld)
        if _bits(ln) + _bits(rd) + _bits(rn) + _bits(ld) <= bit_budget:
            left = _product(ln) * _product(rd)
            right = _product(rn) * _product(ld)
            return left > right if strict else left >= right

    prec = LOG_START_PREC
    while prec <= LOG_MAX_PREC:
        diff = log_sum(lhs, prec) - log_sum(rhs, prec)
        if diff.a > 0:
            return True
        if diff.b < 0:
            return False
        prec *= 2
    raise Inconclusive("could not separate the two sides by interval logarithms")


def log_margin(lhs: Sequence[Term], rhs: Sequence[Term], prec: int = LOG_START_PREC) -> float:
    """Approximate ``ln(prod lhs) - ln(prod rhs)`` for reporting (not used for decisions)."""
    diff = log_sum(lhs, prec) - log_sum(rhs, prec)
    return float(diff.mid)


def endpoint_fraction(x, upper: bool = False) -> Fraction:
    """Exact value of an interval endpoint (``x.a`` or ``x.b``) as a Fraction."""
    raw = x._mpi_[1 if upper else 0]
    sign, man, exp = raw[0], int(raw[1]), raw[2]
    if man == 0:
        return Fraction(0)
    value = Fraction(man) * Fraction(2) ** exp
    return -value if sign else value


def root_lower_bound(x: Fraction, k: int, bits: int = 64) -> Fraction:
    """A dyadic rational r with ``0 < r <= x**(1/k)`` (x > 0, k >= 1)."""
    x = Fraction(x)
    prec = LOG_START_PREC
    with ivprec(prec + 16):
        y = iv.exp(log_rational(x, prec) / k)
    return round_down(endpoint_fraction(y), bits)
