"""Brute-force oracle over products of two 2x2 matrices.

Words are handled in two forms.  `Word` stores exponent blocks
``H^{n_k} R^{m_k} ... H^{n_1} R^{m_1}`` (``blocks[0]`` is the rightmost
block), which is what the closed-form trace formula consumes.  The
enumeration works on letter strings instead: a word of length L is an
L-bit integer whose most significant bit is the leftmost factor, with
bit 1 meaning H and 0 meaning R.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, InvalidWord, NotInDomain
from .mat2 import Matrix2, Membership, classify_membership, spectral_radius

MAX_ENUMERATION_LENGTH = 22


@dataclass(frozen=True)
class Word:
    blocks: tuple[tuple[int, int], ...]

    def __post_init__(self):
        blocks = tuple((int(n), int(m)) for n, m in self.blocks)
        if any(n < 0 or m < 0 for n, m in blocks):
            raise InvalidWord("negative exponent")
        if sum(n + m for n, m in blocks) < 1:
            raise InvalidWord("empty word")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def of(cls, *blocks) -> Word:
        return cls(tuple(blocks))

    @classmethod
    def from_string(cls, s: str) -> Word:
        """Parse e.g. ``"HHRHR"`` (leftmost letter = leftmost factor)."""
        s = s.strip().upper()
        if not s or set(s) - {"H", "R"}:
            raise InvalidWord(f"not a word over {{H, R}}: {s!r}")
        runs = [(ch, len(list(g))) for ch, g in itertools.groupby(reversed(s))]
        blocks = []
        i = 0
        while i < len(runs):
            m = 0
            if runs[i][0] == "R":
                m = runs[i][1]
                i += 1
            n = 0
            if i < len(runs) and runs[i][0] == "H":
                n = runs[i][1]
                i += 1
            blocks.append((n, m))
        return cls(tuple(blocks))

    @property
    def total_length(self) -> int:
        return sum(n + m for n, m in self.blocks)

    def to_string(self) -> str:
        return "".join("H" * n + "R" * m for n, m in reversed(self.blocks))

    def normalized(self) -> Word:
        """Merge blocks so that only ``m_1`` and ``n_k`` may be zero."""
        return Word.from_string(self.to_string())

    def __str__(self):
        return self.to_string()


def word_matrix(h: Matrix2, r: Matrix2, w: Word) -> Matrix2:
    out = Matrix2.identity()
    for n, m in reversed(w.blocks):
        out = out @ h.power(n) @ r.power(m)
    return out


def _stack(m: Matrix2, dtype=np.float64) -> np.ndarray:
    return m.to_array().astype(dtype)


def _rho_batch(mats: np.ndarray) -> np.ndarray:
    tr = mats[:, 0, 0] + mats[:, 1, 1]
    det = mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]
    disc = tr * tr - 4.0 * det
    real = 0.5 * (np.abs(tr) + np.sqrt(np.maximum(disc, 0.0)))
    cplx = np.sqrt(np.maximum(det, 0.0))
    return np.where(disc >= 0.0, real, cplx)


def _norm_batch(mats: np.ndarray) -> np.ndarray:
    # cancellation-free largest singular value, as in mat2.op_norm
    a, b, c, d = mats[:, 0, 0], mats[:, 0, 1], mats[:, 1, 0], mats[:, 1, 1]
    return 0.5 * (np.hypot(a + d, c - b) + np.hypot(a - d, c + b))


def iter_levels(h: Matrix2, r: Matrix2, l_max: int, dtype=np.float64):
    """Yield ``(L, products)`` with ``products[code]`` the word encoded by ``code``.

    Level L+1 is built by left-multiplying level L by R (code bit 0) and
    by H (code bit 1), so index order is fixed and schedule-free.
    """
    hm, rm = _stack(h, dtype), _stack(r, dtype)
    level = np.stack([rm, hm])
    yield 1, level
    for length in range(2, l_max + 1):
        level = np.concatenate([rm @ level, hm @ level])
        yield length, level


def code_to_string(code: int, length: int) -> str:
    return "".join("H" if (code >> (length - 1 - i)) & 1 else "R" for i in range(length))


@dataclass
class GrowthRecord:
    length: int
    min_rho: float
    min_norm: float
    argmin_rho: str
    argmin_norm: str


@dataclass
class GrowthTable:
    records: list[GrowthRecord] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["length", "min_rho", "min_norm", "argmin_word"])
        for rec in self.records:
            writer.writerow([rec.length, repr(rec.min_rho), repr(rec.min_norm),
                             Word.from_string(rec.argmin_rho).normalized().to_string()])
        return buf.getvalue()

    def to_json(self) -> list[dict]:
        return [rec.__dict__.copy() for rec in self.records]


def _check_budget(l_max: int):
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    if l_max > MAX_ENUMERATION_LENGTH:
        raise BudgetExceeded(f"l_max={l_max} exceeds enumeration guard {MAX_ENUMERATION_LENGTH}")


def enumerate_min_growth(h: Matrix2, r: Matrix2, l_max: int) -> GrowthTable:
    """Minimum of rho^(1/L) and ||.||^(1/L) over all 2^L words, for each L <= l_max."""
    _check_budget(l_max)
    table = GrowthTable()
    for length, level in iter_levels(h, r, l_max):
        rho = _rho_batch(level) ** (1.0 / length)
        nrm = _norm_batch(level) ** (1.0 / length)
        i_rho = int(np.argmin(rho))
        i_nrm = int(np.argmin(nrm))
        table.records.append(GrowthRecord(
            length, float(rho[i_rho]), float(nrm[i_nrm]),
            code_to_string(i_rho, length), code_to_string(i_nrm, length)))
    return table


@dataclass
class NewFormulaReport:
    l_max: int
    words_checked: int
    violations: list[tuple[str, float, float]]
    bound_terms: list[float]
    rho_r: float

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "l_max": self.l_max,
            "words_checked": self.words_checked,
            "violations": [{"word": w, "lhs": a, "rhs": b} for w, a, b in self.violations],
            "rho_r": self.rho_r,
            "ok": self.ok,
        }


def verify_newformula(h: Matrix2, r: Matrix2, l_max: int, *, slack: float = 1e-12,
                      max_reported: int = 50, stable: bool = True) -> NewFormulaReport:
    """Check rho(w)^(1/|w|) >= min(rho(R), min_{n<|w|} rho(H R^n)^(1/(n+1))) for every word.

    Spectral radii are similarity invariant, so with ``stable=True`` the
    words are multiplied out in the canonical basis (gamma times the
    rank-one row and a rotation).  Long products of a badly scaled
    conjugate lose digits to cancellation; in the canonical basis the
    equality cases (cyclic shifts of ``H R^n``) stay within a few ulps.
    """
    if classify_membership(h).kind is not Membership.IN_P or \
            classify_membership(r).kind is not Membership.IN_E:
        raise NotInDomain("pair is not in P x E")
    _check_budget(l_max)
    if stable:
        from .canonical import reduce
        c = reduce(h, r)
        h, r = c.h_canonical * c.gamma, c.r_canonical * c.gamma
    # extended precision (64-bit mantissa where the platform has it) for products and bound alike
    dtype = np.longdouble
    hm, rm = _stack(h, dtype), _stack(r, dtype)
    rho_r = float(_rho_batch(rm[None])[0])
    terms = []
    rn = np.eye(2, dtype=dtype)
    for n in range(l_max):
        terms.append(float(_rho_batch((hm @ rn)[None])[0] ** (dtype(1) / (n + 1))))
        rn = rn @ rm
    prefix_min = np.minimum.accumulate(np.array(terms))

    violations: list[tuple[str, float, float]] = []
    checked = 0
    for length, level in iter_levels(h, r, l_max, dtype):
        lhs = _rho_batch(level) ** (dtype(1) / length)
        rhs = min(rho_r, float(prefix_min[length - 1]))
        bad = np.nonzero(lhs < rhs - slack)[0]
        checked += level.shape[0]
        for code in bad[: max(0, max_reported - len(violations))]:
            violations.append((code_to_string(int(code), length), float(lhs[code]), rhs))
    return NewFormulaReport(l_max, checked, violations, terms, rho_r)


def closed_form_min(h: Matrix2, r: Matrix2, length: int) -> float:
    """min(rho(R), rho(H), min_{1<=m<=L-1} rho(H R^m)^(1/(m+1))): the closed-form side."""
    best = min(spectral_radius(r), spectral_radius(h))
    rm = r
    for m in range(1, length):
        best = min(best, spectral_radius(h @ rm) ** (1.0 / (m + 1)))
        rm = rm @ r
    return best
