"""Simultaneous normal form for pairs (H, R) with H rank one and R elliptic.

Every such pair equals ``gamma * A (Hc, Rc) A^-1`` with
``Hc = [[lam, alpha], [0, 0]]`` and ``Rc`` the rotation by ``theta``.
The parameters are read off from trace identities, so they are invariant
under simultaneous similarity; ``A`` is only needed to rebuild the pair.

Convention: ``theta`` is taken in (0, pi).  The opposite choice (-theta)
corresponds to conjugating by a reflection and flips the sign of alpha;
we never return that representative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import Degenerate, IllConditioned, NotInDomain
from .mat2 import Matrix2, Membership, classify_membership, condition_number, rotation

MAX_BASIS_CONDITION = 1e8
SIN_TOL = 1e-12


@dataclass(frozen=True)
class CanonicalPair:
    gamma: float
    lam: float
    alpha: float
    theta: float
    basis: Matrix2
    basis_inv: Matrix2

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if self.lam == 0:
            raise ValueError("lambda must be nonzero")
        if not math.sin(self.theta) > 0:
            raise ValueError("theta must lie in (0, pi)")

    @classmethod
    def from_params(cls, gamma, lam, alpha, theta, basis: Matrix2 | None = None) -> CanonicalPair:
        basis = basis if basis is not None else Matrix2.identity()
        return cls(gamma, lam, alpha, theta, basis, basis.inverse())

    @property
    def h_canonical(self) -> Matrix2:
        return Matrix2(self.lam, self.alpha, 0.0, 0.0)

    @property
    def r_canonical(self) -> Matrix2:
        return rotation(self.theta)

    def to_json(self) -> dict:
        return {
            "gamma": self.gamma,
            "lambda": self.lam,
            "alpha": self.alpha,
            "theta": self.theta,
            "basis": self.basis.flat(),
        }

    @classmethod
    def from_json(cls, doc: dict) -> CanonicalPair:
        basis = Matrix2(*doc["basis"])
        return cls.from_params(doc["gamma"], doc["lambda"], doc["alpha"], doc["theta"], basis)


def reduce(h: Matrix2, r: Matrix2, *, tol: float = 1e-9,
           max_condition: float = MAX_BASIS_CONDITION) -> CanonicalPair:
    if classify_membership(h, tol).kind is not Membership.IN_P:
        raise NotInDomain("h is not a rank-one non-nilpotent matrix")
    if classify_membership(r, tol).kind is not Membership.IN_E:
        raise NotInDomain("r does not have non-real eigenvalues")

    gamma = math.sqrt(r.det)
    h1 = h * (1.0 / gamma)
    r1 = r * (1.0 / gamma)
    lam = h1.trace
    c = max(-1.0, min(1.0, 0.5 * r1.trace))
    theta = math.acos(c)
    s = math.sin(theta)
    if s < SIN_TOL:
        raise Degenerate("r is numerically proportional to +-identity")
    alpha = ((h1 @ r1).trace - lam * c) / s

    # image of h1 is its lambda-eigenline; pick the larger column
    col1 = (h1.a11, h1.a21)
    col2 = (h1.a12, h1.a22)
    u = col1 if math.hypot(*col1) >= math.hypot(*col2) else col2
    nu = math.hypot(*u)
    u = (u[0] / nu, u[1] / nu)
    # second basis vector y = (r1 u - cos(theta) u) / sin(theta) gives A^-1 r1 A = rot(theta)
    ru = (r1.a11 * u[0] + r1.a12 * u[1], r1.a21 * u[0] + r1.a22 * u[1])
    y = ((ru[0] - c * u[0]) / s, (ru[1] - c * u[1]) / s)
    basis = Matrix2(u[0], y[0], u[1], y[1])
    if condition_number(basis) > max_condition:
        raise IllConditioned(f"change of basis has condition number {condition_number(basis):.3g}")
    return CanonicalPair(gamma, lam, alpha, theta, basis, basis.inverse())


def reconstruct(c: CanonicalPair) -> tuple[Matrix2, Matrix2]:
    a, a_inv = c.basis, c.basis_inv
    h = (a @ c.h_canonical @ a_inv) * c.gamma
    r = (a @ c.r_canonical @ a_inv) * c.gamma
    return h, r
