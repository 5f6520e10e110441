"""Spectral quantities of the canonical pair ([[lam, alpha], [0, 0]], rot(theta)).

For this pair ``rho(H R^n) = |lam cos(n theta) + alpha sin(n theta)|``, and the
lower spectral radius is ``inf_n rho(H R^n)^(1/(n+1))``.  Everything here
works in canonical scale; multiply by ``gamma`` for the original pair.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import mpmath
import numpy as np

from .errors import InvalidWord
from .mat2 import Matrix2, op_norm, rotation
from .words import Word

DEFAULT_TRUNCATION = 10_000
TRACE_TOL = 1e-10
RATIO_MARGIN = 1.05


def _check_word(w: Word):
    if any(n < 1 or m < 1 for n, m in w.blocks):
        raise InvalidWord("closed-form trace needs every block exponent >= 1")


def trace_word(lam: float, alpha: float, theta: float, w: Word) -> float:
    """Trace of ``H^{n_k} R^{m_k} ... H^{n_1} R^{m_1}`` in closed form."""
    _check_word(w)
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    total_n = sum(n for n, _ in w.blocks)
    prod = 1.0
    for _, m in w.blocks:
        prod *= math.cos(m * theta) + alpha / lam * math.sin(m * theta)
    return lam ** total_n * prod


def rho_word(lam: float, alpha: float, theta: float, w: Word) -> float:
    # the product is rank one, so its spectral radius is |trace|
    return abs(trace_word(lam, alpha, theta, w))


def canonical_matrices(lam: float, alpha: float, theta: float) -> tuple[Matrix2, Matrix2]:
    return Matrix2(lam, alpha, 0.0, 0.0), rotation(theta)


def hr_terms(lam: float, alpha: float, theta: float, n_max: int) -> np.ndarray:
    """``|lam cos(n theta) + alpha sin(n theta)|`` for n = 0..n_max."""
    n = np.arange(n_max + 1, dtype=float)
    return np.abs(lam * np.cos(n * theta) + alpha * np.sin(n * theta))


class LsrStatus(enum.Enum):
    ZERO_CERTIFIED = "ZeroCertified"
    ATTAINED_HEURISTIC = "AttainedHeuristic"
    UNDETERMINED = "Undetermined"


@dataclass
class ZeroProductCert:
    m: int
    residual_trace: float
    residual_product: float

    def to_json(self) -> dict:
        return {"m": self.m, "residual_trace": self.residual_trace,
                "residual_product": self.residual_product}


@dataclass
class LsrEstimate:
    value: float
    argmin: Optional[int]
    truncation: int
    status: LsrStatus
    per_n: Optional[list[tuple[int, float]]] = None
    zero_cert: Optional[ZeroProductCert] = None

    def to_json(self) -> dict:
        doc = {
            "value": self.value,
            "argmin": self.argmin,
            "truncation": self.truncation,
            "status": self.status.value,
        }
        if self.per_n is not None:
            doc["per_n"] = [[n, v] for n, v in self.per_n]
        if self.zero_cert is not None:
            doc["zero_cert"] = self.zero_cert.to_json()
        return doc


def find_zero_product(lam: float, alpha: float, theta: float, m_max: int,
                      tol: float = TRACE_TOL) -> Optional[ZeroProductCert]:
    """Smallest ``1 <= m <= m_max`` with ``H R^m H`` numerically zero, if any."""
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    terms = hr_terms(lam, alpha, theta, m_max)
    h = Matrix2(lam, alpha, 0.0, 0.0)
    for m in np.nonzero(terms[1:] <= tol)[0] + 1:
        m = int(m)
        residual = op_norm(h @ rotation(m * theta) @ h)
        if residual <= tol:
            return ZeroProductCert(m, float(terms[m]), residual)
    return None


def lsr_estimate(lam: float, alpha: float, theta: float, n_max: int = DEFAULT_TRUNCATION,
                 *, tol: float = TRACE_TOL, keep_table: bool = False) -> LsrEstimate:
    """Truncated infimum ``min_{0<=n<=N} |lam cos n theta + alpha sin n theta|^(1/(n+1))``."""
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    if n_max < 1:
        raise ValueError("truncation must be >= 1")
    terms = hr_terms(lam, alpha, theta, n_max)
    roots = terms ** (1.0 / np.arange(1, n_max + 2))
    per_n = [(i, float(v)) for i, v in enumerate(roots)] if keep_table else None

    zero = find_zero_product(lam, alpha, theta, n_max, tol) if terms[1:].min() <= tol else None
    if zero is not None:
        return LsrEstimate(0.0, zero.m, n_max, LsrStatus.ZERO_CERTIFIED, per_n, zero)

    n_star = int(np.argmin(roots))
    value = float(roots[n_star])
    status = LsrStatus.UNDETERMINED
    if n_star <= n_max // 2 and np.all(roots[n_star + 1:] > value):
        status = LsrStatus.ATTAINED_HEURISTIC
    return LsrEstimate(value, n_star, n_max, status, per_n)


def lsr_estimate_batch(lam: float, alpha: float, thetas: np.ndarray, n_max: int,
                       *, tol: float = TRACE_TOL) -> list[LsrEstimate]:
    """Vectorised `lsr_estimate` over many angles (same results, one pass)."""
    thetas = np.asarray(thetas, dtype=float)
    n = np.arange(n_max + 1, dtype=float)
    angles = np.outer(thetas, n)
    terms = np.abs(lam * np.cos(angles) + alpha * np.sin(angles))
    roots = terms ** (1.0 / (n + 1.0))
    out = []
    for i, theta in enumerate(thetas):
        if terms[i, 1:].min() <= tol:
            out.append(lsr_estimate(lam, alpha, float(theta), n_max, tol=tol))
            continue
        row = roots[i]
        n_star = int(np.argmin(row))
        value = float(row[n_star])
        status = LsrStatus.UNDETERMINED
        if n_star <= n_max // 2 and np.all(row[n_star + 1:] > value):
            status = LsrStatus.ATTAINED_HEURISTIC
        out.append(LsrEstimate(value, n_star, n_max, status))
    return out


@dataclass
class RatioBound:
    theta0: float
    c0: float
    grid_points: int
    sup_ratio: float = field(default=math.nan)
    inf_ratio: float = field(default=math.nan)

    def holds(self, lam: float, alpha: float, theta) -> np.ndarray:
        """Two-sided inequality ``d/c0 <= |lam cos + alpha sin| <= c0 d`` at each theta."""
        theta = np.asarray(theta, dtype=float)
        f = np.abs(lam * np.cos(theta) + alpha * np.sin(theta))
        g = coset_distance(theta, self.theta0, math.pi)
        return (g / self.c0 <= f) & (f <= self.c0 * g)

    def to_json(self) -> dict:
        return {"theta0": self.theta0, "c0": self.c0, "grid_points": self.grid_points}


def zero_angle(lam: float, alpha: float) -> float:
    """The zero of ``lam cos + alpha sin`` in (-pi/2, pi/2]."""
    if alpha == 0:
        return math.pi / 2
    return math.atan(-lam / alpha)


def coset_distance(x, a: float, b: float):
    """dist(x, a + b Z), elementwise."""
    y = np.mod(np.asarray(x, dtype=float) - a, b)
    return np.minimum(y, b - y)


def ratio_bound(lam: float, alpha: float, grid: int = 20_000, *,
                exclude: float = 1e-6, margin: float = RATIO_MARGIN) -> RatioBound:
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    if grid < 1000:
        raise ValueError("grid must have at least 1000 points")
    theta0 = zero_angle(lam, alpha)
    theta = np.linspace(-math.pi / 2, math.pi / 2, grid)
    g = coset_distance(theta, theta0, math.pi)
    keep = g > exclude
    f = np.abs(lam * np.cos(theta[keep]) + alpha * np.sin(theta[keep]))
    ratio = f / g[keep]
    sup_r, inf_r = float(ratio.max()), float(ratio.min())
    c0 = max(sup_r, 1.0 / inf_r, 1.0) * margin
    return RatioBound(theta0, c0, grid, sup_r, inf_r)


def perturb_to_zero(lam: float, alpha: float, theta: float, m: int) -> float:
    """Nearest angle to ``theta`` at which ``lam cos(m t) + alpha sin(m t)`` vanishes.

    Zeros sit at ``(theta0 + j pi)/m``; the candidate is evaluated in extended
    precision and rounded once, so ``m * theta'`` lands within ``m`` ulps of
    an exact zero.
    """
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    if m < 1:
        raise ValueError("m must be >= 1")
    with mpmath.workdps(40):
        t0 = mpmath.pi / 2 if alpha == 0 else mpmath.atan(-mpmath.mpf(lam) / mpmath.mpf(alpha))
        j = int(mpmath.nint((m * mpmath.mpf(theta) - t0) / mpmath.pi))
        return float((t0 + j * mpmath.pi) / m)


def hr_residual_exact(lam: float, alpha: float, theta: float, m: int, dps: int = 40) -> float:
    """``|lam cos(m theta) + alpha sin(m theta)|`` for the float theta, evaluated at high precision."""
    with mpmath.workdps(dps):
        x = m * mpmath.mpf(theta)
        return float(abs(lam * mpmath.cos(x) + alpha * mpmath.sin(x)))


def zero_product_norm(lam: float, alpha: float, theta: float, m: int) -> float:
    """``||H R^m H||`` with ``R^m`` formed as ``rot(m theta)``."""
    h = Matrix2(lam, alpha, 0.0, 0.0)
    return op_norm(h @ rotation(m * theta) @ h)
