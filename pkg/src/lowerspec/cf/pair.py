"""Synthesis of pairs (H_alpha, R_theta) that lack the lower finiteness property.

The zero angle of ``lam cos + alpha sin`` is put at a rational multiple
``pi a / b`` of pi (prime b), the angle is ``theta = pi v / b`` with v from
the continued-fraction construction, and the result is packaged as a
verified certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from mpmath import iv, mp

from ..spectrum import LsrEstimate, LsrStatus, lsr_estimate, ratio_bound
from .certificate import NonFinitenessCertificate, PairParams, global_delta, verify_certificate
from .contfrac import RationalInterval, eval_enclosure
from .exact import endpoint_fraction, ivprec
from .forge import (DEFAULT_STEPS, DIGIT_BUDGET, choose_rational_angle, exact_alpha,
                    extend_nonfinite, seed_congruent_prefix, target_enclosure, theta_eps)

DEFAULT_N_MAX = 1000


def theta_interval(v: RationalInterval, b: int, shift: int, prec: int = 256) -> RationalInterval:
    """Rational interval containing ``pi v / b + shift pi``."""
    with ivprec(prec):
        lo = iv.mpf(v.lo.numerator) / v.lo.denominator
        hi = iv.mpf(v.hi.numerator) / v.hi.denominator
        lo_t = lo * iv.pi / b + shift * iv.pi
        hi_t = hi * iv.pi / b + shift * iv.pi
        return RationalInterval(min(endpoint_fraction(lo_t), endpoint_fraction(hi_t)),
                                max(endpoint_fraction(lo_t, True), endpoint_fraction(hi_t, True)))


def make_pair(lam, alpha_target: float, theta_target, K=2, eps: float = 0.05,
              steps: int = DEFAULT_STEPS, *, b_max: int = 50, n_max: int = DEFAULT_N_MAX,
              digit_budget: int = DIGIT_BUDGET, ratio_grid: int = 20_000) -> NonFinitenessCertificate:
    """Forge a pair near (alpha_target, theta_target) with positive, unattained lower spectral radius."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    K = Fraction(str(K)) if not isinstance(K, Fraction) else K
    if K <= 1:
        raise ValueError("K must be > 1")
    lam_s = str(lam)
    lam_f = float(Fraction(lam_s))
    if lam_f == 0:
        raise ValueError("lambda must be nonzero")

    choice = choose_rational_angle(lam_f, alpha_target, eps, b_max=b_max)
    a, b = choice.a, choice.b
    target, shift = target_enclosure(str(theta_target), b)
    eps_v = theta_eps(eps, b, target)
    prefix = seed_congruent_prefix(target, a, b, eps_v)
    ext = extend_nonfinite(prefix.cf, a, b, K, steps, digit_budget=digit_budget, defer=True)

    v = eval_enclosure(ext.cf, ext.cf.depth, tight=True)
    with mp.workdps(60):
        v_mid = (mp.mpf(v.lo.numerator) / v.lo.denominator)
        theta = float(mp.pi * v_mid / b + shift * mp.pi)
    pair = PairParams(lam_s, exact_alpha(lam_f, a, b), choice.alpha,
                      theta_interval(v, b, shift), theta, shift)
    cert = NonFinitenessCertificate(
        cf=ext.cf, a=a, b=b, K=K, N=ext.N, n0=prefix.n0, C_exp=ext.C_exp,
        requested_steps=steps, deferred_steps=ext.deferred_steps,
        pair=pair, divisible_branch=prefix.divisible_branch,
        target={"alpha": alpha_target, "theta": str(theta_target), "eps": eps,
                "enclosure": target.to_json(), "eps_scaled": str(eps_v)},
    )
    report = verify_certificate(cert, n_max, check_recorded=False)
    cert.checked_to = n_max
    cert.witness_table = report.witnesses
    cert.delta_lower = report.delta_lower
    cert.delta_global = global_delta(ext.cf, ext.N, ext.C_exp, K, b)

    rb = ratio_bound(lam_f, choice.alpha, ratio_grid)
    cert.c0 = rb.c0
    cert.lsr_floor = lsr_floor(cert.delta_global, rb.c0, b)
    return cert


def lsr_floor(delta: Fraction, c0: float, b: int) -> float:
    """``pi delta / (C0 b)``, rounded down."""
    return math.nextafter(math.pi * float(delta) / (c0 * b), 0.0)


def certificate_angle(cert: NonFinitenessCertificate) -> Optional[float]:
    return None if cert.pair is None else cert.pair.theta


@dataclass
class CrossCheck:
    scan: LsrEstimate
    floor: float
    floor_ok: bool
    chain: list[tuple[int, float]]
    chain_decreasing: bool
    witness_ok: bool
    beaten_by: Optional[int]

    @property
    def ok(self) -> bool:
        return self.floor_ok and self.chain_decreasing and self.witness_ok

    def to_json(self) -> dict:
        return {"scan": self.scan.to_json(), "floor": self.floor, "floor_ok": self.floor_ok,
                "chain": [[n, v] for n, v in self.chain],
                "chain_decreasing": self.chain_decreasing, "witness_ok": self.witness_ok,
                "beaten_by": self.beaten_by, "ok": self.ok}


def term_mp(cert: NonFinitenessCertificate, n: int):
    """``|lam cos(n theta) + alpha sin(n theta)|^(1/(n+1))`` in multiprecision.

    theta is taken from the exact enclosure of the angle parameter, with
    enough digits that the enclosure width times n is far below the value.
    """
    cf, b = cert.cf, cert.b
    M = cf.depth
    # the term at n is about dist(n v) >= 1/(2 q_{j+1}); the deepest convergent pins v far tighter
    j = cf.index_for(n) if n < cf.q(M) else M - 1
    digits = len(str(cf.q(min(j + 1, M)))) + len(str(max(n, 1))) + 60
    with mp.workdps(digits):
        lam = mp.mpf(Fraction(cert.pair.lam).numerator) / Fraction(cert.pair.lam).denominator
        alpha = -lam / mp.tan(mp.pi * cert.a / b)
        v = mp.mpf(cf.p(M)) / cf.q(M)
        theta = mp.pi * v / b + cert.pair.theta_shift * mp.pi
        x = abs(lam * mp.cos(n * theta) + alpha * mp.sin(n * theta))
        return x ** (mp.mpf(1) / (n + 1))


def float_cross_check(cert: NonFinitenessCertificate, n_scan: int = 200) -> CrossCheck:
    """Double-precision scan over n <= n_scan, plus the witness chain from the scan's argmin.

    The scan's minimum must sit above the certified floor.  Witness terms
    beyond the scan (or below double resolution) are evaluated in
    multiprecision; they must strictly decrease along the chain, so the
    scan's apparent minimum is not attained.
    """
    lam = float(Fraction(cert.pair.lam))
    scan = lsr_estimate(lam, cert.pair.alpha_float, cert.pair.theta, n_scan)
    floor_ok = scan.status is not LsrStatus.ZERO_CERTIFIED and scan.value >= cert.lsr_floor

    table = {w.n: w for w in cert.witness_table}
    n = scan.argmin
    chain = [(n, float(term_mp(cert, n)))]
    while n in table and not table[n].tail:
        n = cert.cf.q(table[n].q_index)
        chain.append((n, float(term_mp(cert, n))))
    decreasing = all(y < x for (_, x), (_, y) in zip(chain, chain[1:])) and len(chain) > 1

    # every scanned n is beaten by its recorded witness, evaluated in multiprecision
    cache: dict[int, float] = {}
    witness_ok = True
    for k in range(min(n_scan, cert.checked_to) + 1):
        w = table.get(k)
        if w is None or w.tail:
            continue
        q = cert.cf.q(w.q_index)
        if q not in cache:
            cache[q] = term_mp(cert, q)
        if not term_mp(cert, k) > cache[q]:
            witness_ok = False
            break
    beaten_by = chain[1][0] if len(chain) > 1 else None
    return CrossCheck(scan, cert.lsr_floor, floor_ok, chain, decreasing, witness_ok, beaten_by)
