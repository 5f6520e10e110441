"""Command-line entry point.

Exit codes: 0 success, 1 domain error, 2 verification failure, 64 usage error.
Every JSON document carries a ``run`` block (subcommand, parameters as
given, seed, format, output path) and the tool version; CSV output carries
the same information as leading ``#`` comment lines.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

from . import __version__
from .canonical import reduce
from .cf import NonFinitenessCertificate, float_cross_check, make_pair, verify_certificate
from .errors import DomainError, Inconclusive, VerificationFailed
from .experiments import classify, sample_measure
from .mat2 import Matrix2, rotation
from .spectrum import find_zero_product, lsr_estimate, perturb_to_zero, zero_product_norm
from .words import enumerate_min_growth, verify_newformula

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_VERIFY = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class RunConfig:
    subcommand: str
    params: dict = field(default_factory=dict)
    seed: Optional[int] = None
    format: str = "json"
    output: Optional[str] = None


def _angle(args) -> float:
    if getattr(args, "theta_pi", None):
        return math.pi * float(Fraction(args.theta_pi))
    if args.theta is None:
        raise UsageError("one of --theta or --theta-pi is required")
    return float(args.theta)


def _matrix(text: str) -> Matrix2:
    parts = [p for p in text.replace(",", " ").split() if p]
    if len(parts) != 4:
        raise UsageError(f"matrix needs 4 entries (row-major), got {text!r}")
    return Matrix2(*(float(p) for p in parts))


def _pair(args) -> tuple[Matrix2, Matrix2]:
    """Explicit --h/--r, or the canonical pair from --lambda/--alpha/--theta."""
    if args.h is not None or args.r is not None:
        if args.h is None or args.r is None:
            raise UsageError("--h and --r must be given together")
        return _matrix(args.h), _matrix(args.r)
    if args.lam is None:
        raise UsageError("give --h/--r or --lambda/--alpha/--theta")
    return Matrix2(float(args.lam), float(args.alpha), 0.0, 0.0), rotation(_angle(args))


def _add_canonical(p, pair: bool = False):
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--alpha", default="0")
    p.add_argument("--theta")
    p.add_argument("--theta-pi", help="angle as a rational multiple of pi, e.g. 1/2")
    if pair:
        p.add_argument("--h", help="H as 4 row-major entries")
        p.add_argument("--r", help="R as 4 row-major entries")


def build_parser() -> Parser:
    parser = Parser(prog="lowerspec", description="Lower spectral radius of rank-one/elliptic pairs.")
    parser.add_argument("--version", action="version", version=f"lowerspec {__version__}")
    common = Parser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--output", "-o")
    common.add_argument("--threads", type=int, default=1)
    sub = parser.add_subparsers(dest="subcommand", parser_class=Parser)

    p = sub.add_parser("reduce", parents=[common], help="canonical form of a pair")
    p.add_argument("--h", required=True)
    p.add_argument("--r", required=True)

    p = sub.add_parser("lsr", parents=[common], help="truncated lower spectral radius")
    _add_canonical(p)
    p.add_argument("--N", type=int, default=10_000)
    p.add_argument("--per-n", action="store_true")

    p = sub.add_parser("zeros", parents=[common], help="zero products H R^m H")
    _add_canonical(p)
    p.add_argument("--M", type=int, default=1000)
    p.add_argument("--perturb", type=int, metavar="m",
                   help="also move theta to the nearest zero of the m-th term")

    for name, helptext in (("enumerate", "brute-force minimal growth per length"),
                           ("verify-newformula", "check the lower bound over all words")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        _add_canonical(p, pair=True)
        p.add_argument("--L", type=int, required=True)

    p = sub.add_parser("forge", parents=[common], help="forge a non-finiteness certificate")
    p.add_argument("--lambda", dest="lam", default="1")
    p.add_argument("--alpha-target", type=float, required=True)
    p.add_argument("--theta-target", required=True)
    p.add_argument("--K", default="2")
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--steps", type=int, default=3)
    p.add_argument("--b-max", type=int, default=50)
    p.add_argument("--n-max", type=int, default=1000)
    p.add_argument("--cross-check", action="store_true",
                   help="also run the floating-point scan over n <= 200")

    p = sub.add_parser("verify-cert", parents=[common], help="re-verify a certificate file")
    p.add_argument("certificate")
    p.add_argument("--n-max", type=int)

    p = sub.add_parser("sample", parents=[common], help="Monte-Carlo statistics over theta")
    p.add_argument("--lambda", dest="lam", default="1")
    p.add_argument("--alpha", default="0")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--N", type=int, default=2000)
    p.add_argument("--seed", type=int, default=42)

    p = sub.add_parser("classify", parents=[common], help="evidence-based U1..U4 label")
    _add_canonical(p, pair=True)
    p.add_argument("--N", type=int, default=10_000)
    p.add_argument("--M", type=int)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--certificate")
    return parser


def _config(args) -> RunConfig:
    skip = {"subcommand", "format", "output", "seed"}
    params = {k: (None if v is None else str(v)) for k, v in vars(args).items() if k not in skip}
    return RunConfig(args.subcommand, params, getattr(args, "seed", None), args.format, args.output)


def _envelope(cfg: RunConfig, result) -> dict:
    return {"tool": "lowerspec", "version": __version__, "run": asdict(cfg), "result": result}


def _csv_header(cfg: RunConfig) -> str:
    return f"# tool=lowerspec version={__version__}\n# run={json.dumps(asdict(cfg))}\n"


def _emit(cfg: RunConfig, result, csv_text: Optional[str] = None):
    if cfg.format == "csv":
        if csv_text is None:
            raise UsageError(f"{cfg.subcommand} has no CSV output; use --format json")
        text = _csv_header(cfg) + csv_text
    else:
        text = json.dumps(_envelope(cfg, result), indent=1) + "\n"
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_reduce(args, cfg):
    c = reduce(_matrix(args.h), _matrix(args.r))
    _emit(cfg, c.to_json())
    return EXIT_OK


def _cmd_lsr(args, cfg):
    est = lsr_estimate(float(args.lam), float(args.alpha), _angle(args), args.N,
                       keep_table=args.per_n or cfg.format == "csv")
    csv_text = None
    if cfg.format == "csv":
        csv_text = "n,rho_root\n" + "".join(f"{n},{v!r}\n" for n, v in est.per_n)
    _emit(cfg, est.to_json(), csv_text)
    return EXIT_OK


def _cmd_zeros(args, cfg):
    lam, alpha, theta = float(args.lam), float(args.alpha), _angle(args)
    cert = find_zero_product(lam, alpha, theta, args.M)
    result = {"zero_cert": None if cert is None else cert.to_json()}
    if args.perturb:
        t2 = perturb_to_zero(lam, alpha, theta, args.perturb)
        result["perturbed"] = {"m": args.perturb, "theta": t2, "shift": abs(t2 - theta),
                               "product_norm": zero_product_norm(lam, alpha, t2, args.perturb)}
    _emit(cfg, result)
    return EXIT_OK


def _cmd_enumerate(args, cfg):
    h, r = _pair(args)
    table = enumerate_min_growth(h, r, args.L)
    _emit(cfg, table.to_json(), table.to_csv() if cfg.format == "csv" else None)
    return EXIT_OK


def _cmd_verify_newformula(args, cfg):
    h, r = _pair(args)
    report = verify_newformula(h, r, args.L)
    _emit(cfg, report.to_json())
    return EXIT_OK if report.ok else EXIT_VERIFY


def _cmd_forge(args, cfg):
    cert = make_pair(args.lam, args.alpha_target, args.theta_target, Fraction(args.K), args.eps,
                     args.steps, b_max=args.b_max, n_max=args.n_max)
    doc = cert.to_json()
    doc["run"] = asdict(cfg)
    doc["version"] = __version__
    if args.cross_check:
        doc["cross_check"] = float_cross_check(cert).to_json()
    text = json.dumps(doc, indent=1) + "\n"
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _load_certificate(path: str) -> NonFinitenessCertificate:
    with open(path) as fh:
        return NonFinitenessCertificate.loads(fh.read())


def _cmd_verify_cert(args, cfg):
    cert = _load_certificate(args.certificate)
    report = verify_certificate(cert, args.n_max)
    _emit(cfg, report.to_json())
    return EXIT_OK


def _cmd_sample(args, cfg):
    stats = sample_measure(float(args.lam), float(args.alpha), args.samples, args.N, args.seed,
                           threads=args.threads)
    _emit(cfg, stats.to_json(), stats.to_csv() if cfg.format == "csv" else None)
    return EXIT_OK


def _cmd_classify(args, cfg):
    h, r = _pair(args)
    cert = _load_certificate(args.certificate) if args.certificate else None
    _emit(cfg, classify(h, r, args.N, args.M, tol=args.tol, certificate=cert).to_json())
    return EXIT_OK


COMMANDS = {
    "reduce": _cmd_reduce,
    "lsr": _cmd_lsr,
    "zeros": _cmd_zeros,
    "enumerate": _cmd_enumerate,
    "verify-newformula": _cmd_verify_newformula,
    "forge": _cmd_forge,
    "verify-cert": _cmd_verify_cert,
    "sample": _cmd_sample,
    "classify": _cmd_classify,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.subcommand:
            raise UsageError("missing subcommand; see --help")
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        cfg = _config(args)
        return COMMANDS[args.subcommand](args, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (VerificationFailed, Inconclusive) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except DomainError as exc:
        print(f"domain error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
