"""Continued fractions with exact big-integer convergents and rational enclosures.

Convergents here are the usual ones of ``[a0; a1, a2, ...]``, i.e.
``p_k/q_k`` already includes ``a0``: ``(p_-1, q_-1) = (1, 0)`` and
``(p_0, q_0) = (a0, 1)``.  The coset congruences of the construction are
stated for the convergents of the fractional part, whose numerators are
``p_k - a0 q_k``; the integer ``(p_k - a0 q_k) + a0 q_k`` they involve is
exactly our ``p_k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ..errors import AmbiguousCoset, DepthExceeded, InvalidQuotient


@dataclass(frozen=True)
class ContinuedFraction:
    a0: int
    quotients: tuple[int, ...]
    _p: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _q: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        a0 = int(self.a0)
        quotients = tuple(int(x) for x in self.quotients)
        for i, x in enumerate(quotients, start=1):
            if x < 1:
                raise InvalidQuotient(f"partial quotient a_{i} = {x} is not >= 1")
        p, q = [1, a0], [0, 1]
        for x in quotients:
            p.append(x * p[-1] + p[-2])
            q.append(x * q[-1] + q[-2])
        object.__setattr__(self, "a0", a0)
        object.__setattr__(self, "quotients", quotients)
        object.__setattr__(self, "_p", tuple(p))
        object.__setattr__(self, "_q", tuple(q))

    @property
    def depth(self) -> int:
        """Index of the last available convergent."""
        return len(self.quotients)

    def quotient(self, k: int) -> int:
        return self.a0 if k == 0 else self.quotients[k - 1]

    def _check(self, k: int):
        if k < -1 or k > self.depth:
            raise DepthExceeded(f"convergent index {k} outside [-1, {self.depth}]")

    def p(self, k: int) -> int:
        self._check(k)
        return self._p[k + 1]

    def q(self, k: int) -> int:
        self._check(k)
        return self._q[k + 1]

    def convergent(self, k: int) -> Fraction:
        return Fraction(self.p(k), self.q(k))

    @property
    def convergents(self) -> list[tuple[int, int]]:
        """``[(p_-1, q_-1), (p_0, q_0), ..., (p_depth, q_depth)]``."""
        return list(zip(self._p, self._q))

    def extended(self, more: Sequence[int]) -> ContinuedFraction:
        return ContinuedFraction(self.a0, self.quotients + tuple(more))

    def truncated(self, depth: int) -> ContinuedFraction:
        self._check(depth)
        return ContinuedFraction(self.a0, self.quotients[:max(depth, 0)])

    def index_for(self, n: int) -> int:
        """The j with ``q_j <= n < q_{j+1}`` (j = -1 for n = 0)."""
        if n < 0:
            raise ValueError("n must be >= 0")
        if n >= self._q[-1]:
            raise DepthExceeded(f"n={n} is not below the deepest denominator")
        # q_k is non-decreasing; ties only at q_0 = q_1 = 1
        lo, hi = 0, len(self._q) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self._q[mid] <= n:
                lo = mid
            else:
                hi = mid
        return lo - 1

    def to_json(self) -> dict:
        return {"a0": str(self.a0), "quotients": [str(x) for x in self.quotients]}

    @classmethod
    def from_json(cls, doc: dict) -> ContinuedFraction:
        return cls(int(doc["a0"]), tuple(int(x) for x in doc["quotients"]))


def convergents(a0: int, quotients: Sequence[int]) -> ContinuedFraction:
    return ContinuedFraction(a0, tuple(quotients))


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if lo > hi:
            raise ValueError("empty interval")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def of(cls, x, y) -> RationalInterval:
        x, y = Fraction(x), Fraction(y)
        return cls(min(x, y), max(x, y))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: RationalInterval) -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def scaled(self, c) -> RationalInterval:
        return RationalInterval.of(self.lo * c, self.hi * c)

    def shifted(self, c) -> RationalInterval:
        return RationalInterval(self.lo + c, self.hi + c)

    def to_json(self) -> dict:
        return {"lo": str(self.lo), "hi": str(self.hi)}

    @classmethod
    def from_json(cls, doc: dict) -> RationalInterval:
        return cls(Fraction(doc["lo"]), Fraction(doc["hi"]))


def eval_enclosure(cf: ContinuedFraction, depth: int, *, tight: bool = False) -> RationalInterval:
    """Rational interval containing every extension of ``cf`` truncated at `depth`.

    Default endpoints are the consecutive convergents ``p_{d-1}/q_{d-1}`` and
    ``p_d/q_d``.  With ``tight=True`` the far endpoint is the mediant
    ``(p_d + p_{d-1})/(q_d + q_{d-1})`` instead, which still contains every
    infinite extension (all later quotients are >= 1) and has width
    ``1/(q_d (q_d + q_{d-1})) < 1/q_d^2``.
    """
    if depth < 0 or depth > cf.depth:
        raise DepthExceeded(f"depth {depth} outside [0, {cf.depth}]")
    near = Fraction(cf.p(depth), cf.q(depth))
    if tight:
        far = Fraction(cf.p(depth) + cf.p(depth - 1), cf.q(depth) + cf.q(depth - 1))
    else:
        if depth == 0:
            raise DepthExceeded("depth 0 has no preceding finite convergent")
        far = Fraction(cf.p(depth - 1), cf.q(depth - 1))
    return RationalInterval.of(near, far)


def _coset_dist_exact(x: Fraction, b: int) -> Fraction:
    r = x % b
    return min(r, b - r)


def dist_coset(n: int, cf: ContinuedFraction, a: int, b: int, depth: Optional[int] = None,
               *, tight: bool = True,
               enclosure: Optional[RationalInterval] = None) -> RationalInterval:
    """Exact enclosure of ``dist(n * theta, a + b Z)`` for theta given by `cf`."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if b < 1:
        raise ValueError("b must be positive")
    if enclosure is None:
        enclosure = eval_enclosure(cf, cf.depth if depth is None else depth, tight=tight)
    lo = n * enclosure.lo - a
    hi = n * enclosure.hi - a
    d_lo, d_hi = _coset_dist_exact(lo, b), _coset_dist_exact(hi, b)
    if lo == hi:
        return RationalInterval(d_lo, d_lo)
    # first midpoint b(l + 1/2) strictly above lo
    first_mid = b * (math.floor(lo / b - Fraction(1, 2)) + Fraction(3, 2))
    if first_mid < hi:
        raise AmbiguousCoset(f"enclosure of {n}*theta straddles a coset midpoint; deepen")
    if math.ceil(lo / b) * b <= hi:
        return RationalInterval(Fraction(0), max(d_lo, d_hi))
    return RationalInterval.of(d_lo, d_hi)


def coset_distance_ratios(n: int, lo: tuple[int, int], hi: tuple[int, int], a: int, b: int):
    """`dist_coset` on an enclosure given as integer ratios ``(num, den)``, without reducing.

    Returns ``((lo_num, lo_den), (hi_num, hi_den))``, lower and upper bounds
    of the distance.  Avoiding Fraction normalization matters once the
    denominators have tens of thousands of digits.
    """
    ends = []
    for num, den in (lo, hi):
        x = n * num - a * den
        m = b * den
        r = x % m
        ell = (2 * x + m) // (2 * m)  # index of the nearest coset point
        ends.append((min(r, m - r), den, ell, x - ell * m))
    (d0, den0, l0, s0), (d1, den1, l1, s1) = ends
    if l0 != l1:
        raise AmbiguousCoset(f"enclosure of {n}*theta straddles a coset midpoint; deepen")
    if (s0 < 0) != (s1 < 0) or s0 == 0 or s1 == 0:
        # the coset point itself lies in the enclosure
        upper = (d0, den0) if d0 * den1 >= d1 * den0 else (d1, den1)
        return (0, 1), upper
    if d0 * den1 <= d1 * den0:
        return (d0, den0), (d1, den1)
    return (d1, den1), (d0, den0)


def expand_interval(iv: RationalInterval, max_terms: int = 10_000):
    """Yield ``(k, b_k)`` for the partial quotients shared by every point of `iv`.

    Stops (returns) at the first quotient not determined by the interval.
    """
    lo, hi = iv.lo, iv.hi
    k = 0
    while k < max_terms:
        f_lo, f_hi = math.floor(lo), math.floor(hi)
        if f_lo != f_hi or lo == f_lo:
            return
        yield k, f_lo
        lo, hi = 1 / (hi - f_hi), 1 / (lo - f_lo)
        k += 1
