"""Construction of angles whose coset distances keep improving.

`seed_congruent_prefix` steers a continued-fraction prefix so that its last
two convergent numerators are congruent to ``a`` mod ``b``; `extend_nonfinite`
then appends quotients that are multiples of ``b`` and grow fast enough that
``dist(q_n theta, a + bZ)^(1/(q_n+1))`` strictly decreases along the
convergent denominators.  `make_pair` ties both to a target (alpha, theta).

The denominators grow doubly exponentially: after ``a_{N+1}`` the next
quotient already has more digits than can be stored.  Quotients whose
estimated size exceeds the digit budget are left *deferred*: they are fully
determined by the growth rule, and verification uses only the inequality
the rule guarantees for them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from mpmath import iv, mp

from ..errors import DigitBudgetExceeded, EnclosureTooWide, NoRationalAngle
from .contfrac import ContinuedFraction, RationalInterval, expand_interval
from .exact import ceil_div, endpoint_fraction, ivprec, ceil_power_over, compare_products

DIGIT_BUDGET = 100_000
DEFAULT_STEPS = 3
LOG10_2 = math.log10(2)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def _check_coset(a: int, b: int):
    if not is_prime(b):
        raise ValueError(f"b={b} is not prime")
    if a % b == 0:
        raise ValueError("a must be nonzero mod b")


def congruences_hold(cf: ContinuedFraction, a: int, b: int, n: Optional[int] = None) -> bool:
    """``p_n ≡ p_{n-1} ≡ a (mod b)`` at index n (default: the tip)."""
    n = cf.depth if n is None else n
    return (cf.p(n) - a) % b == 0 and (cf.p(n - 1) - a) % b == 0


@dataclass
class SeededPrefix:
    cf: ContinuedFraction
    n0: int
    N: int
    divisible_branch: bool

    def to_json(self) -> dict:
        return {"n0": self.n0, "N": self.N, "divisible_branch": self.divisible_branch}


def seed_congruent_prefix(theta0: RationalInterval, a: int, b: int, eps: Fraction) -> SeededPrefix:
    """Prefix ``(a_0..a_N)`` of theta0's expansion, steered into the coset congruences.

    Any infinite extension of the returned prefix lies within `eps` of every
    point of `theta0`.
    """
    _check_coset(a, b)
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not (-Fraction(b, 2) < theta0.lo and theta0.hi < Fraction(b, 2)):
        raise ValueError("theta0 must lie inside (-b/2, b/2)")

    terms = []
    q_prev, q_cur = 0, 1
    for k, bk in expand_interval(theta0):
        terms.append(bk)
        if k >= 1:
            q_prev, q_cur = q_cur, bk * q_cur + q_prev
            if 2 < eps * q_cur * q_cur:  # 1/Q^2 < eps/2
                break
    else:
        raise EnclosureTooWide("theta0 enclosure does not pin down enough partial quotients")

    n0 = len(terms) - 1
    # any extension stays within 1/Q^2 of the convergent, which is within 1/Q^2 of theta0;
    # make sure that also holds for the whole enclosure, not just its points
    cf = ContinuedFraction(terms[0], tuple(terms[1:]))
    conv = cf.convergent(n0)
    slack = Fraction(1, cf.q(n0) ** 2)
    if max(abs(theta0.lo - conv), abs(theta0.hi - conv)) + slack >= eps:
        raise EnclosureTooWide("theta0 enclosure is too wide for the requested eps")

    divisible = False
    base = n0
    if cf.p(base) % b == 0:
        divisible = True
        cf = cf.extended([1])
        base += 1
    k1 = _solve_step(cf.p(base), cf.p(base - 1), a, b)
    cf = cf.extended([k1])
    # p_{base+1} = a (mod b) now; the second quotient must also keep p_{base+2} = a,
    # which is k2 = b only when p_base = a already
    k2 = _solve_step(cf.p(base + 1), cf.p(base), a, b)
    cf = cf.extended([k2])
    return SeededPrefix(cf, n0, base + 2, divisible)


def _solve_step(p_cur: int, p_prev: int, a: int, b: int) -> int:
    """The k in [1, b] with ``k p_cur + p_prev = a (mod b)`` (p_cur invertible mod b)."""
    return next(k for k in range(1, b + 1) if (k * p_cur + p_prev - a) % b == 0)


def estimate_digits_bewgry(q_n: int, K: Fraction) -> float:
    """Decimal digits of ``(2 K q_N)^(1 + q_N)``."""
    return (1 + q_n) * _log10(2 * Fraction(K) * q_n)


def _log10(x: Fraction) -> float:
    x = Fraction(x)
    return (x.numerator.bit_length() - x.denominator.bit_length()) * LOG10_2 + \
        math.log10(_mantissa(x))


def _mantissa(x: Fraction) -> float:
    shift = x.numerator.bit_length() - x.denominator.bit_length()
    y = x / Fraction(2) ** shift
    return float(y)


def first_growth_quotient(q_prev: int, q_cur: int, K: Fraction, b: int) -> int:
    """Smallest multiple a of b with ``a q_cur + q_prev > (2 K q_cur)^(1 + q_cur)``."""
    K = Fraction(K)
    x = 2 * K * q_cur
    e = 1 + q_cur
    num, den = x.numerator ** e, x.denominator ** e
    # a q_cur den + q_prev den > num
    floor_a = (num - q_prev * den) // (q_cur * den)
    a_min = max(floor_a + 1, 1)
    return b * ceil_div(a_min, b)


def bewgry_holds(q_prev: int, q_cur: int, q_next: int, K: Fraction) -> bool:
    """``q_next > (2 K q_cur)^(1 + q_cur)``, in exact integers."""
    x = 2 * Fraction(K) * q_cur
    e = 1 + q_cur
    return q_next * x.denominator ** e > x.numerator ** e


def growth_rule_quotient(q_prev: int, q_cur: int, K: Fraction, b: int) -> int:
    """``b * ceil(q_cur^-1 (2 K q_cur)^((1 + q_cur)/(1 + q_prev)))``."""
    return b * ceil_power_over(2 * Fraction(K) * q_cur, Fraction(1 + q_cur, 1 + q_prev), q_cur)


def estimate_digits_rule(q_prev: int, q_cur: int, K: Fraction, b: int) -> float:
    """Decimal digits of the next denominator under the growth rule."""
    lg = log10_digits_rule(q_prev, q_cur, K, b)
    return 10.0 ** lg if lg < 300 else math.inf


def log10_digits_rule(q_prev: int, q_cur: int, K: Fraction, b: int) -> float:
    """log10 of `estimate_digits_rule`, finite even when the digit count is not."""
    lg_ratio = _log10(Fraction(1 + q_cur, 1 + q_prev))
    lg_base = math.log10(_log10(2 * Fraction(K) * q_cur) + math.log10(b) + 1)
    return lg_ratio + lg_base


def smallest_power_of_two_exponent(q_next: int, q_cur: int) -> int:
    """Smallest j >= 1 with ``q_next <= 2^(j (1 + q_cur))``."""
    need = (q_next - 1).bit_length()
    return max(1, ceil_div(need, 1 + q_cur))


def induct_left(q2: int, q1: int, q0: int, K: Fraction) -> bool:
    """``(2 K q1)^(1/(1+q0)) < q2^(1/(1+q1))``."""
    return compare_products([(q2, Fraction(1, 1 + q1))],
                            [(2 * Fraction(K) * q1, Fraction(1, 1 + q0))])


def induct_right(cf: ContinuedFraction, n: int, N: int, C_exp: int, K: Fraction, b: int) -> bool:
    """``q_n^(1/(1+q_{n-1})) <= C (4Kb)^(sum_{k=N}^{n-2} 1/(1+q_k))`` with C = 2^C_exp."""
    s = sum((Fraction(1, 1 + cf.q(k)) for k in range(N, n - 1)), Fraction(0))
    lhs = [(cf.q(n), Fraction(1, 1 + cf.q(n - 1)))]
    rhs = [(2, C_exp), (4 * Fraction(K) * b, s)]
    return compare_products(rhs, lhs, strict=False)


@dataclass
class StepRecord:
    index: int
    quotient_digits: int
    congruence: bool
    left: bool
    right: bool


@dataclass
class Extension:
    cf: ContinuedFraction
    N: int
    C_exp: int
    requested_steps: int
    materialized_steps: int
    deferred_steps: int
    steps: list[StepRecord] = field(default_factory=list)
    next_log10_digits: Optional[float] = None

    @property
    def deepest(self) -> int:
        return self.cf.depth


def extend_nonfinite(cf: ContinuedFraction, a: int, b: int, K, steps: int = DEFAULT_STEPS, *,
                     digit_budget: int = DIGIT_BUDGET, defer: bool = False) -> Extension:
    """Append ``a_{N+1}`` and then `steps` growth-rule quotients.

    Raises `DigitBudgetExceeded` as soon as a denominator is estimated to
    exceed `digit_budget` digits, unless `defer` is set, in which case the
    remaining steps are recorded as deferred and the prefix built so far is
    returned.  The size estimate happens before any big power is formed.
    """
    _check_coset(a, b)
    K = Fraction(K)
    if K <= 1:
        raise ValueError("K must be > 1")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    N = cf.depth
    if N < 1 or not congruences_hold(cf, a, b, N):
        raise ValueError("prefix does not satisfy the coset congruences at its tip")

    est = estimate_digits_bewgry(cf.q(N), K)
    if est > digit_budget:
        raise DigitBudgetExceeded(f"q_{N + 1} would have about {est:.3g} digits",
                                  index=N + 1, estimated_digits=est)
    a_next = first_growth_quotient(cf.q(N - 1), cf.q(N), K, b)
    cf = cf.extended([a_next])
    q_next = cf.q(N + 1)
    if not bewgry_holds(cf.q(N - 1), cf.q(N), q_next, K):
        raise AssertionError("first growth quotient violates its defining inequality")
    if a_next > b and bewgry_holds(cf.q(N - 1), cf.q(N), q_next - b * cf.q(N), K):
        raise AssertionError("first growth quotient is not minimal")
    C_exp = smallest_power_of_two_exponent(q_next, cf.q(N))
    records = [StepRecord(N + 1, len(str(a_next)), congruences_hold(cf, a, b, N + 1),
                          induct_left(q_next, cf.q(N), cf.q(N - 1), K),
                          induct_right(cf, N + 1, N, C_exp, K, b))]

    done = 0
    for _ in range(steps):
        m = cf.depth
        lg = log10_digits_rule(cf.q(m - 1), cf.q(m), K, b)
        if lg > math.log10(digit_budget):
            if defer:
                break
            raise DigitBudgetExceeded(f"q_{m + 1} would have about 10^{lg:.3g} digits",
                                      index=m + 1, estimated_digits=estimate_digits_rule(
                                          cf.q(m - 1), cf.q(m), K, b))
        cf = cf.extended([growth_rule_quotient(cf.q(m - 1), cf.q(m), K, b)])
        records.append(StepRecord(m + 1, len(str(cf.quotient(m + 1))),
                                  congruences_hold(cf, a, b, m + 1),
                                  induct_left(cf.q(m + 1), cf.q(m), cf.q(m - 1), K),
                                  induct_right(cf, m + 1, N, C_exp, K, b)))
        done += 1
    m = cf.depth
    next_lg = log10_digits_rule(cf.q(m - 1), cf.q(m), K, b)
    bad = [r.index for r in records if not (r.congruence and r.left and r.right)]
    if bad:
        raise AssertionError(f"growth step invariants failed at indices {bad}")
    return Extension(cf, N, C_exp, steps, done, steps - done, records, next_lg)


# --- pair synthesis -----------------------------------------------------------------------


def primes_between(lo: int, hi: int) -> list[int]:
    return [p for p in range(lo, hi + 1) if is_prime(p)]


@dataclass(frozen=True)
class AngleChoice:
    a: int
    b: int
    alpha: float


def choose_rational_angle(lam: float, alpha_target: float, eps: float, *,
                          b_min: int = 5, b_max: int = 50) -> AngleChoice:
    """Prime b and a with ``alpha = -lam / tan(pi a / b)`` closest to the target.

    Candidates are all primes ``b_min <= b <= b_max`` and nonzero a with
    ``|a/b| < 1/2``; ties go to the smaller b.  Raises `NoRationalAngle` when
    no candidate lands within `eps`.
    """
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    best = None
    for b in primes_between(max(b_min, 5), b_max):
        for a in range(-(b // 2), b // 2 + 1):
            if a == 0:
                continue
            alpha = -lam / math.tan(math.pi * a / b)
            err = abs(alpha - alpha_target)
            if best is None or err < best[0]:
                best = (err, AngleChoice(a, b, alpha))
    if best is None or not best[0] < eps:
        raise NoRationalAngle(f"no a/b with prime b <= {b_max} puts alpha within {eps} of target")
    return best[1]


def exact_alpha(lam: float, a: int, b: int, dps: int = 50) -> str:
    """High-precision decimal for ``-lam cot(pi a / b)``."""
    with mp.workdps(dps):
        return mp.nstr(-mp.mpf(lam) / mp.tan(mp.pi * a / b), dps - 5)


def target_enclosure(theta_target: str, b: int, prec: int = 256) -> tuple[RationalInterval, int]:
    """Rational interval around ``b (t - k pi) / pi``, with k chosen so ``t - k pi`` is in (-pi/2, pi/2].

    Returns the interval and k.  Shifting the angle by a multiple of pi leaves
    every ``|lam cos(n t) + alpha sin(n t)|`` unchanged.
    """
    t = Fraction(str(theta_target))
    with mp.workdps(50):
        k = int(mp.ceil((mp.mpf(t.numerator) / t.denominator - mp.pi / 2) / mp.pi))
    with ivprec(prec):
        x = iv.mpf(t.numerator) / t.denominator
        y = (x - k * iv.pi) * b / iv.pi
        lo, hi = endpoint_fraction(y), endpoint_fraction(y, upper=True)
    return RationalInterval(lo, hi), k


def theta_eps(eps: float, b: int, enclosure: RationalInterval) -> Fraction:
    """Tolerance for theta in units of pi/b, also keeping it inside (-b/2, b/2)."""
    # 3.14159266 > pi, so this is <= eps * b / pi
    e = Fraction(eps) * b * Fraction(100000000, 314159266)
    inside = min(Fraction(b, 2) - enclosure.hi, enclosure.lo + Fraction(b, 2))
    return min(e, inside)
