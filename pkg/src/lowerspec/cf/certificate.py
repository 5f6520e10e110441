"""Non-finiteness certificates: JSON form and exact re-verification.

A certificate stores the materialized partial quotients ``a_0 .. a_M`` of an
angle parameter ``v`` (the pair's angle is ``pi v / b``) together with the
coset ``a + bZ`` and the growth constant ``K``.  Quotients after ``a_M``
are the deferred growth-rule quotients; nothing about them is used except
the inequality the rule guarantees,
``dist(q_M v, a + bZ)^(1/(1+q_M)) < (1/(2 K q_M))^(1/(1+q_{M-1}))``.

`verify_certificate` recomputes everything from the quotients alone, using
exact integers and rationals plus outward-rounded interval logarithms where
cleared powers would be too large.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..errors import AmbiguousCoset, Inconclusive, InvalidQuotient, VerificationFailed
from .contfrac import (ContinuedFraction, RationalInterval, coset_distance_ratios,
                       eval_enclosure)
from .exact import compare_products, log_margin, root_lower_bound, round_down_ratio, round_up_ratio
from .forge import (bewgry_holds, congruences_hold, growth_rule_quotient, induct_left,
                    induct_right, is_prime, smallest_power_of_two_exponent)

SCHEMA_ID = "lowerspec.certificate/1"
ROUND_BITS = 128


@dataclass
class Witness:
    n: int
    j: int
    q_index: int
    margin: float
    tail: bool = False

    def to_json(self) -> dict:
        return {"n": self.n, "j": self.j, "q_index": self.q_index,
                "margin": self.margin, "tail": self.tail}

    @classmethod
    def from_json(cls, doc: dict) -> Witness:
        return cls(int(doc["n"]), int(doc["j"]), int(doc["q_index"]), float(doc["margin"]),
                   bool(doc.get("tail", False)))


@dataclass
class PairParams:
    lam: str
    alpha: str
    alpha_float: float
    theta_enclosure: RationalInterval
    theta: float
    theta_shift: int

    def to_json(self) -> dict:
        return {"lambda": self.lam, "alpha": self.alpha, "alpha_float": self.alpha_float,
                "theta_enclosure": self.theta_enclosure.to_json(), "theta": self.theta,
                "theta_shift_pi": self.theta_shift}

    @classmethod
    def from_json(cls, doc: dict) -> PairParams:
        return cls(doc["lambda"], doc["alpha"], float(doc["alpha_float"]),
                   RationalInterval.from_json(doc["theta_enclosure"]), float(doc["theta"]),
                   int(doc["theta_shift_pi"]))


@dataclass
class NonFinitenessCertificate:
    cf: ContinuedFraction
    a: int
    b: int
    K: Fraction
    N: int
    n0: int
    C_exp: int
    requested_steps: int
    deferred_steps: int
    checked_to: int = 0
    witness_table: list[Witness] = field(default_factory=list)
    delta_lower: Optional[Fraction] = None
    delta_global: Optional[Fraction] = None
    pair: Optional[PairParams] = None
    target: Optional[dict] = None
    c0: Optional[float] = None
    lsr_floor: Optional[float] = None
    divisible_branch: bool = False

    @property
    def M(self) -> int:
        return self.cf.depth

    @property
    def materialized_steps(self) -> int:
        return self.cf.depth - self.N - 1

    @property
    def delta(self) -> Optional[Fraction]:
        """delta used for the positivity floor: valid for every n, not just the checked range."""
        return self.delta_global

    def to_json(self) -> dict:
        doc = {
            "schema": SCHEMA_ID,
            "cf": self.cf.to_json(),
            "a": self.a,
            "b": self.b,
            "K": str(self.K),
            "N": self.N,
            "n0": self.n0,
            "divisible_branch": self.divisible_branch,
            "C_exp": self.C_exp,
            "requested_steps": self.requested_steps,
            "materialized_steps": self.materialized_steps,
            "deferred_steps": self.deferred_steps,
            "checked_to": self.checked_to,
            "witness_table": [w.to_json() for w in self.witness_table],
            "delta_lower": None if self.delta_lower is None else str(self.delta_lower),
            "delta_global": None if self.delta_global is None else str(self.delta_global),
            "pair": None if self.pair is None else self.pair.to_json(),
            "target": self.target,
            "c0": self.c0,
            "lsr_floor": self.lsr_floor,
        }
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, doc: dict) -> NonFinitenessCertificate:
        from ..schemas import validate
        validate(doc, "certificate")
        frac = lambda s: None if s is None else Fraction(s)  # noqa: E731
        try:
            cf = ContinuedFraction.from_json(doc["cf"])
        except InvalidQuotient as exc:
            raise VerificationFailed(str(exc), check="quotients") from exc
        return cls(
            cf=cf, a=int(doc["a"]), b=int(doc["b"]), K=Fraction(doc["K"]),
            N=int(doc["N"]), n0=int(doc["n0"]), C_exp=int(doc["C_exp"]),
            requested_steps=int(doc["requested_steps"]),
            deferred_steps=int(doc["deferred_steps"]),
            checked_to=int(doc["checked_to"]),
            witness_table=[Witness.from_json(w) for w in doc["witness_table"]],
            delta_lower=frac(doc.get("delta_lower")),
            delta_global=frac(doc.get("delta_global")),
            pair=None if doc.get("pair") is None else PairParams.from_json(doc["pair"]),
            target=doc.get("target"),
            c0=doc.get("c0"),
            lsr_floor=doc.get("lsr_floor"),
            divisible_branch=bool(doc.get("divisible_branch", False)),
        )

    @classmethod
    def loads(cls, text: str) -> NonFinitenessCertificate:
        return cls.from_json(json.loads(text))


@dataclass
class VerificationReport:
    n_max: int
    checks: list[tuple[str, str]]
    witnesses: list[Witness]
    delta_lower: Fraction
    delta_global: Fraction
    min_margin: float

    @property
    def ok(self) -> bool:
        # failures raise, so a report only exists for a passing certificate
        return True

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "n_max": self.n_max,
            "checks": [{"name": n, "detail": d} for n, d in self.checks],
            "delta_lower": str(self.delta_lower),
            "delta_lower_float": float(self.delta_lower),
            "delta_global": str(self.delta_global),
            "delta_global_float": float(self.delta_global),
            "min_margin": self.min_margin,
        }


def _fail(check: str, message: str, n: Optional[int] = None):
    raise VerificationFailed(f"{check}: {message}" + (f" (n={n})" if n is not None else ""),
                             n=n, check=check)


def _decide(check: str, fn, *args, n: Optional[int] = None) -> bool:
    try:
        return fn(*args)
    except Inconclusive as exc:
        _fail(check, f"inconclusive comparison: {exc}", n)


def global_delta(cf: ContinuedFraction, N: int, C_exp: int, K: Fraction, b: int) -> Fraction:
    """``min(1/(2 q_N), C^-1 (4Kb)^-4 / 2)``: a lower bound for every ``dist(n v)^(1/(n+1))``."""
    return min(Fraction(1, 2 * cf.q(N)),
               Fraction(1, 2 * 2 ** C_exp) / (4 * K * b) ** 4)


def verify_certificate(cert: NonFinitenessCertificate, n_max: Optional[int] = None, *,
                       check_recorded: bool = True) -> VerificationReport:
    """Re-check a certificate from its quotients; raise `VerificationFailed` on any failure."""
    cf, a, b, K, N = cert.cf, cert.a, cert.b, Fraction(cert.K), cert.N
    M = cf.depth
    n_max = cert.checked_to if n_max is None else n_max
    checks: list[tuple[str, str]] = []

    # structure
    if not is_prime(b) or b < 2:
        _fail("structure", f"b={b} is not prime")
    if a % b == 0:
        _fail("structure", "a is divisible by b")
    if K <= 1:
        _fail("structure", "K must exceed 1")
    if not 1 <= N < M:
        _fail("structure", f"need 1 <= N < M, got N={N}, M={M}")
    if n_max < 0:
        _fail("structure", "n_max must be >= 0")
    if n_max >= cf.q(M):
        _fail("structure", f"n_max={n_max} is not below q_M; not enough quotients")
    checks.append(("structure", f"b={b} prime, a={a}, K={K}, N={N}, M={M}"))

    # coset congruences at N
    if not congruences_hold(cf, a, b, N):
        _fail("congruence", f"p_N or p_(N-1) not congruent to a mod b at N={N}")
    checks.append(("congruence", f"p_{N} = p_{N - 1} = {a % b} (mod {b})"))

    # first growth quotient: divisible by b, satisfies the growth inequality, minimal
    a1 = cf.quotient(N + 1)
    if a1 % b:
        _fail("growth", f"a_{N + 1} is not a multiple of b")
    if not bewgry_holds(cf.q(N - 1), cf.q(N), cf.q(N + 1), K):
        _fail("growth", f"q_{N + 1} <= (2K q_N)^(1+q_N)")
    if a1 > b and bewgry_holds(cf.q(N - 1), cf.q(N), cf.q(N + 1) - b * cf.q(N), K):
        _fail("growth", f"a_{N + 1} is not the smallest admissible multiple of b")
    if not 2 * K * cf.q(N) > 1:
        _fail("growth", "2K q_N <= 1")
    checks.append(("growth", f"a_{N + 1} has {len(str(a1))} digits, minimal multiple of {b}"))

    if cert.C_exp != smallest_power_of_two_exponent(cf.q(N + 1), cf.q(N)):
        _fail("constant", "recorded C exponent is not the smallest power of two")
    checks.append(("constant", f"C = 2^{cert.C_exp}"))

    # later materialized quotients follow the rule; induction inequalities on both sides
    for n in range(N + 1, M + 1):
        if n >= N + 2:
            expected = growth_rule_quotient(cf.q(n - 2), cf.q(n - 1), K, b)
            if cf.quotient(n) != expected:
                _fail("rule", f"a_{n} differs from the growth rule", n)
        if not congruences_hold(cf, a, b, n):
            _fail("induct-congruence", f"congruence lost at index {n}", n)
        if not _decide("induct-left", induct_left, cf.q(n), cf.q(n - 1), cf.q(n - 2), K, n=n):
            _fail("induct-left", f"lower growth bound fails at index {n}", n)
        if not _decide("induct-right", induct_right, cf, n, N, cert.C_exp, K, b, n=n):
            _fail("induct-right", f"upper growth bound fails at index {n}", n)
    checks.append(("induction", f"indices {N + 1}..{M} satisfy congruence and both growth bounds"))

    enclosure = eval_enclosure(cf, M, tight=True)
    half = Fraction(b, 2)
    if not (-half < enclosure.lo and enclosure.hi < half):
        _fail("range", "angle parameter not inside (-b/2, b/2)")

    if cert.target is not None:
        lo, hi = Fraction(cert.target["enclosure"]["lo"]), Fraction(cert.target["enclosure"]["hi"])
        tol = Fraction(cert.target["eps_scaled"])
        far = max(abs(enclosure.hi - lo), abs(hi - enclosure.lo))
        if not far < tol:
            _fail("target", "angle parameter is not within tolerance of the target")
        checks.append(("target", f"within {float(tol):.3g} of the target (units of pi/b)"))

    if cert.pair is not None:
        _check_pair(cert, enclosure, checks)

    witnesses, delta, min_margin = _check_range(cf, a, b, K, N, n_max, enclosure)
    checks.append(("first-bit", f"strict witness inequality for every n <= {n_max}"))
    checks.append(("claim", f"dist(n v, a+bZ) > 1/(2 q_(j+1)) for every n <= {n_max}"))

    d_global = global_delta(cf, N, cert.C_exp, K, b)
    if delta < d_global:
        _fail("second-bit", "checked-range minimum below the global lower bound")
    checks.append(("second-bit", f"min dist^(1/(n+1)) >= {float(delta):.6g} on the checked range, "
                                 f">= {float(d_global):.3g} everywhere"))

    if check_recorded:
        m = min(n_max, cert.checked_to)
        recorded = {w.n: w for w in cert.witness_table}
        for w in witnesses[:m + 1]:
            r = recorded.get(w.n)
            if r is None or (r.j, r.q_index, r.tail) != (w.j, w.q_index, w.tail):
                _fail("witness-table", "recorded witness does not match recomputation", w.n)
        if cert.delta_global is not None and cert.delta_global != d_global:
            _fail("delta", "recorded global delta does not match recomputation")
        if cert.delta_lower is not None:
            if cert.delta_lower > delta and cert.checked_to <= n_max:
                _fail("delta", "recorded delta_lower exceeds recomputed bound")
            if cert.checked_to == n_max and cert.delta_lower != delta:
                _fail("delta", "recorded delta_lower does not match recomputation")
        checks.append(("recorded", "witness table and deltas match"))

    return VerificationReport(n_max, checks, witnesses, delta, d_global, min_margin)


def _check_pair(cert: NonFinitenessCertificate, enclosure: RationalInterval, checks):
    from .pair import theta_interval
    expected = theta_interval(enclosure, cert.b, cert.pair.theta_shift)
    recorded = cert.pair.theta_enclosure
    if not recorded.contains_interval(expected):
        _fail("pair", "recorded theta enclosure does not contain pi v / b")
    checks.append(("pair", "theta enclosure contains pi v / b"))


def _check_range(cf: ContinuedFraction, a: int, b: int, K: Fraction, N: int, n_max: int,
                 enclosure: RationalInterval):
    M = cf.depth
    # the tight enclosure as unreduced integer ratios
    ends = ((cf.p(M), cf.q(M)), (cf.p(M) + cf.p(M - 1), cf.q(M) + cf.q(M - 1)))
    upper_cache: dict[int, Fraction] = {}

    def bounds(k: int):
        try:
            return coset_distance_ratios(k, ends[0], ends[1], a, b)
        except AmbiguousCoset:
            _fail("enclosure", "coset point ambiguous at the deepest depth", k)

    def upper(i: int) -> Fraction:
        if i not in upper_cache:
            num, den = bounds(cf.q(i))[1]
            upper_cache[i] = round_up_ratio(num, den, ROUND_BITS)
        return upper_cache[i]

    witnesses: list[Witness] = []
    delta: Optional[Fraction] = None
    min_margin = float("inf")
    for n in range(n_max + 1):
        (lo_num, lo_den), _ = bounds(n)
        j = cf.index_for(n)
        if not 2 * cf.q(j + 1) * lo_num > lo_den:
            _fail("claim", f"dist(n v) not above 1/(2 q_{j + 1})", n)
        lower = round_down_ratio(lo_num, lo_den, ROUND_BITS)
        lhs = [(lower / K, Fraction(1, n + 1))]

        found = None
        first = N if j < N else j + 1
        for i in [first] + [k for k in range(j + 1, M + 1) if k != first]:
            if cf.q(i) <= n:
                continue
            if i < M:
                rhs = [(upper(i), Fraction(1, cf.q(i) + 1))]
                strict = True
            else:
                # deferred tail: dist(q_M v)^(1/(1+q_M)) < (1/(2K q_M))^(1/(1+q_{M-1}))
                rhs = [(1 / (2 * K * cf.q(M)), Fraction(1, 1 + cf.q(M - 1)))]
                strict = False
            try:
                ok = compare_products(lhs, rhs, strict=strict)
            except Inconclusive:
                ok = False
            if ok:
                found = Witness(n, j, i, log_margin(lhs, rhs), tail=(i == M))
                break
        if found is None:
            _fail("first-bit", "no convergent denominator witnesses the strict inequality", n)
        witnesses.append(found)
        min_margin = min(min_margin, found.margin)

        root = root_lower_bound(lower, n + 1)
        delta = root if delta is None else min(delta, root)
    return witnesses, delta, min_margin


__all__ = ["NonFinitenessCertificate", "VerificationReport", "Witness", "PairParams",
           "verify_certificate", "global_delta"]
