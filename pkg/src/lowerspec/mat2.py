"""Closed-form linear algebra for real 2x2 matrices."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

MEMBERSHIP_TOL = 1e-9


@dataclass(frozen=True)
class Matrix2:
    a11: float
    a12: float
    a21: float
    a22: float

    def __post_init__(self):
        for name in ("a11", "a12", "a21", "a22"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"Matrix2 entry {name} is not finite: {v!r}")
            object.__setattr__(self, name, v)

    @classmethod
    def from_rows(cls, rows) -> Matrix2:
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def from_array(cls, arr) -> Matrix2:
        arr = np.asarray(arr, dtype=float)
        return cls(arr[0, 0], arr[0, 1], arr[1, 0], arr[1, 1])

    @classmethod
    def identity(cls) -> Matrix2:
        return cls(1.0, 0.0, 0.0, 1.0)

    def to_array(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]])

    def flat(self) -> list[float]:
        return [self.a11, self.a12, self.a21, self.a22]

    @property
    def trace(self) -> float:
        return self.a11 + self.a22

    @property
    def det(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a21

    def __matmul__(self, other: Matrix2) -> Matrix2:
        return Matrix2(
            self.a11 * other.a11 + self.a12 * other.a21,
            self.a11 * other.a12 + self.a12 * other.a22,
            self.a21 * other.a11 + self.a22 * other.a21,
            self.a21 * other.a12 + self.a22 * other.a22,
        )

    def __mul__(self, c: float) -> Matrix2:
        return Matrix2(c * self.a11, c * self.a12, c * self.a21, c * self.a22)

    __rmul__ = __mul__

    def __add__(self, other: Matrix2) -> Matrix2:
        return Matrix2(self.a11 + other.a11, self.a12 + other.a12,
                       self.a21 + other.a21, self.a22 + other.a22)

    def __sub__(self, other: Matrix2) -> Matrix2:
        return self + (-1.0) * other

    def transpose(self) -> Matrix2:
        return Matrix2(self.a11, self.a21, self.a12, self.a22)

    def inverse(self) -> Matrix2:
        d = self.det
        if d == 0.0:
            raise ZeroDivisionError("singular matrix")
        return Matrix2(self.a22 / d, -self.a12 / d, -self.a21 / d, self.a11 / d)

    def power(self, k: int) -> Matrix2:
        if k < 0:
            raise ValueError("negative power")
        result, base = Matrix2.identity(), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def frobenius(self) -> float:
        return math.hypot(self.a11, self.a12, self.a21, self.a22)


def spectral_radius(m: Matrix2) -> float:
    """Largest eigenvalue modulus, from the roots of x^2 - tr x + det."""
    tr, det = m.trace, m.det
    disc = tr * tr - 4.0 * det
    if disc >= 0.0:
        return 0.5 * (abs(tr) + math.sqrt(disc))
    # complex pair: |lambda|^2 = det > 0
    return math.sqrt(det)


def op_norm(m: Matrix2) -> float:
    """Operator 2-norm (largest singular value).

    Uses ``(|z1| + |z2|) / 2`` with ``z1 = (a11 + a22, a21 - a12)`` and
    ``z2 = (a11 - a22, a21 + a12)``; the textbook ``f^2 - 4 det^2`` form
    cancels catastrophically for near-orthogonal matrices.
    """
    return 0.5 * (math.hypot(m.a11 + m.a22, m.a21 - m.a12) + math.hypot(m.a11 - m.a22, m.a21 + m.a12))


def rotation(theta: float) -> Matrix2:
    c, s = math.cos(theta), math.sin(theta)
    return Matrix2(c, -s, s, c)


def diag(x: float, y: float) -> Matrix2:
    return Matrix2(x, 0.0, 0.0, y)


def condition_number(m: Matrix2) -> float:
    """2-norm condition number; inf for singular input."""
    d = abs(m.det)
    if d == 0.0:
        return math.inf
    s_max = op_norm(m)
    return s_max * s_max / d


class Membership(enum.Enum):
    IN_P = "InP"
    IN_E = "InE"
    NEITHER = "Neither"


class MembershipResult(NamedTuple):
    kind: Membership
    borderline: bool = False


def classify_membership(m: Matrix2, tol: float = MEMBERSHIP_TOL) -> MembershipResult:
    """Decide membership in P (rank one, not nilpotent) or E (non-real eigenvalues).

    Inputs whose determinant/discriminant sit within `tol` of a class
    boundary come back as NEITHER with ``borderline=True``.
    """
    tr, det = m.trace, m.det
    disc = tr * tr - 4.0 * det
    if abs(det) <= tol:
        if abs(tr) > tol:
            return MembershipResult(Membership.IN_P)
        return MembershipResult(Membership.NEITHER, borderline=True)
    if disc < -tol:
        return MembershipResult(Membership.IN_E)
    return MembershipResult(Membership.NEITHER, borderline=abs(disc) <= tol)
