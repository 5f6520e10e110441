"""Monte-Carlo statistics over random angles and an evidence-based pair classifier.

Random streams: ``numpy.random.SeedSequence(seed)`` is spawned into one child
per chunk of `CHUNK` consecutive samples, and each chunk draws its angles
from ``Generator(PCG64(child))``.  The angles therefore depend only on the
seed and the sample index, never on how many worker threads run the chunks.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .canonical import reduce
from .cf.certificate import NonFinitenessCertificate, verify_certificate
from .errors import LowerSpecError
from .mat2 import Matrix2
from .spectrum import (DEFAULT_TRUNCATION, LsrEstimate, LsrStatus, ZeroProductCert,
                       find_zero_product, lsr_estimate, lsr_estimate_batch)

CHUNK = 128
U1_TOL = 1e-6


@dataclass
class SampleRecord:
    index: int
    theta: float
    value: float
    argmin: Optional[int]
    status: str


@dataclass
class MeasureStats:
    samples: int
    truncation: int
    seed: int
    lam: float
    alpha: float
    attained_positive_fraction: float
    zero_fraction: float
    undetermined_fraction: float
    argmin_histogram: dict[int, int]
    records: list[SampleRecord] = field(default_factory=list, repr=False)

    def summary(self) -> dict:
        return {
            "samples": self.samples,
            "truncation": self.truncation,
            "seed": self.seed,
            "lambda": self.lam,
            "alpha": self.alpha,
            "attained_positive_fraction": self.attained_positive_fraction,
            "zero_fraction": self.zero_fraction,
            "undetermined_fraction": self.undetermined_fraction,
            "argmin_histogram": {str(k): v for k, v in sorted(self.argmin_histogram.items())},
            "rng": "numpy PCG64, SeedSequence(seed).spawn per chunk of %d samples" % CHUNK,
        }

    def to_json(self) -> dict:
        return self.summary()

    def to_csv(self) -> str:
        """One row per sample, then the summary as ``# key=value`` lines."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "theta", "value", "argmin", "status"])
        for rec in self.records:
            writer.writerow([rec.index, repr(rec.theta), repr(rec.value),
                             "" if rec.argmin is None else rec.argmin, rec.status])
        for key, value in self.summary().items():
            if key != "argmin_histogram":
                buf.write(f"# {key}={value}\n")
        return buf.getvalue()


def chunk_thetas(seed: int, samples: int) -> list[np.ndarray]:
    """Angles uniform on (0, 2 pi), grouped by chunk; independent of worker count."""
    n_chunks = max(1, math.ceil(samples / CHUNK))
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    out = []
    for i, child in enumerate(children):
        size = min(CHUNK, samples - i * CHUNK)
        rng = np.random.Generator(np.random.PCG64(child))
        theta = rng.uniform(0.0, 2.0 * math.pi, size)
        # uniform() is on [0, 2 pi); the open interval excludes the measure-zero endpoint
        theta[theta == 0.0] = math.pi
        out.append(theta)
    return out


def _sample_status(est: LsrEstimate) -> str:
    if est.status is LsrStatus.ZERO_CERTIFIED:
        return "zero"
    if est.status is LsrStatus.ATTAINED_HEURISTIC and est.value > 0:
        return "attained_positive"
    return "undetermined"


def sample_measure(lam: float, alpha: float, samples: int, N: int, seed: int, *,
                   threads: int = 1) -> MeasureStats:
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    chunks = chunk_thetas(seed, samples)

    def run(theta: np.ndarray) -> list[LsrEstimate]:
        return lsr_estimate_batch(lam, alpha, theta, N)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, chunks))
    else:
        results = [run(c) for c in chunks]

    records = []
    counts: Counter = Counter()
    hist: Counter = Counter()
    idx = 0
    for theta, ests in zip(chunks, results):
        for t, est in zip(theta, ests):
            status = _sample_status(est)
            counts[status] += 1
            if est.argmin is not None:
                hist[est.argmin] += 1
            records.append(SampleRecord(idx, float(t), est.value, est.argmin, status))
            idx += 1
    return MeasureStats(
        samples, N, seed, lam, alpha,
        counts["attained_positive"] / samples,
        counts["zero"] / samples,
        counts["undetermined"] / samples,
        dict(hist), records)


class Label(enum.Enum):
    U1 = "U1"
    U2 = "U2"
    U3 = "U3"
    U4 = "U4"
    UNRESOLVED = "Unresolved"


@dataclass
class PairClass:
    label: Label
    heuristic: bool
    lsr: LsrEstimate
    gamma: float
    zero_cert: Optional[ZeroProductCert] = None
    certificate: Optional[dict] = None

    def check(self) -> None:
        """Structural consistency between label and evidence."""
        if self.label is Label.U2 and self.zero_cert is None:
            raise AssertionError("U2 without a zero-product certificate")
        if self.label is Label.U3 and (self.certificate is None or not self.certificate["verified"]):
            raise AssertionError("U3 without a verified certificate")
        if self.label is Label.U4 and not (
                self.lsr.status is LsrStatus.ATTAINED_HEURISTIC and self.lsr.value > 0):
            raise AssertionError("U4 without positive heuristic attainment")
        if self.label in (Label.U2, Label.U3) and self.heuristic:
            raise AssertionError("U2/U3 labels are certified, not heuristic")

    def to_json(self) -> dict:
        return {
            "label": self.label.value,
            "heuristic": self.heuristic,
            "evidence": {
                "lsr": self.lsr.to_json(),
                "lsr_original_scale": self.lsr.value * self.gamma,
                "zero_cert": None if self.zero_cert is None else self.zero_cert.to_json(),
                "certificate": self.certificate,
            },
        }


def _normalized(lam: float, alpha: float, theta: float) -> tuple[float, float, float]:
    """Representative with theta in [0, pi]; (alpha, theta) ~ (-alpha, -theta) by a reflection."""
    theta = math.fmod(theta, 2 * math.pi)
    if theta < 0:
        theta += 2 * math.pi
    if theta > math.pi:
        return lam, -alpha, 2 * math.pi - theta
    return lam, alpha, theta


def certificate_matches(cert: NonFinitenessCertificate, lam: float, alpha: float, theta: float,
                        tol: float = 1e-9) -> bool:
    if cert.pair is None:
        return False
    lc, ac, tc = _normalized(float(cert.pair.lam), cert.pair.alpha_float, cert.pair.theta)
    lr, ar, tr = _normalized(lam, alpha, theta)
    scale = max(1.0, abs(lc), abs(ac))
    return abs(lc - lr) <= tol * scale and abs(ac - ar) <= tol * scale and abs(tc - tr) <= tol


def classify(h: Matrix2, r: Matrix2, N: int = DEFAULT_TRUNCATION, M: Optional[int] = None, *,
             tol: float = U1_TOL, certificate: Optional[NonFinitenessCertificate] = None,
             verify_n_max: Optional[int] = None) -> PairClass:
    """Label a pair U1..U4 from the evidence computable at depth N (lsr) and M (zeros).

    An attached certificate that matches the reduced parameters and passes
    exact verification wins over floating-point evidence: at the forged
    angles some ``H R^m H`` are far below double resolution and would
    otherwise be mistaken for exact zeros.
    """
    c = reduce(h, r)
    M = N if M is None else M
    est = lsr_estimate(c.lam, c.alpha, c.theta, N)
    zero = find_zero_product(c.lam, c.alpha, c.theta, M)

    cert_doc = None
    if certificate is not None:
        cert_doc = {"a": certificate.a, "b": certificate.b, "N": certificate.N,
                    "checked_to": certificate.checked_to, "matches": False, "verified": False}
        if certificate_matches(certificate, c.lam, c.alpha, c.theta):
            cert_doc["matches"] = True
            try:
                verify_certificate(certificate, verify_n_max)
                cert_doc["verified"] = True
            except LowerSpecError as exc:
                cert_doc["error"] = str(exc)

    if cert_doc is not None and cert_doc["verified"]:
        out = PairClass(Label.U3, False, est, c.gamma, zero, cert_doc)
    elif zero is not None:
        out = PairClass(Label.U2, False, est, c.gamma, zero, cert_doc)
    elif est.status is LsrStatus.ATTAINED_HEURISTIC and est.value > 0:
        out = PairClass(Label.U4, True, est, c.gamma, None, cert_doc)
    elif est.value < tol:
        out = PairClass(Label.U1, True, est, c.gamma, None, cert_doc)
    else:
        out = PairClass(Label.UNRESOLVED, True, est, c.gamma, None, cert_doc)
    out.check()
    return out
