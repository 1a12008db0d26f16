"""Command-line front end.

Matrices are read from JSON files (see :mod:`unimoments.serialize`); the
shipped worked examples can be named as ``fixture:x4``, ``fixture:ex3`` or
``fixture:f6``. Every command prints one JSON document.

Exit codes: 0 success, 1 I/O or parse error, 2 validation failure,
3 domain precondition, 4 resource cap, 5 internal error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from . import bounds, clifford, correlation, extremality, fixtures, moments
from . import matkernel as mk
from . import serialize as ser
from .errors import DimensionMismatch, DomainError, NumericalError, ResourceError, ValidationError
from .matkernel import Tolerance

EXIT_OK, EXIT_IO, EXIT_VALIDATION, EXIT_DOMAIN, EXIT_RESOURCE, EXIT_INTERNAL = range(6)


@dataclass(frozen=True)
class CliConfig:
    tol: Tolerance
    seed: int = 0
    dimension_cap: int = clifford.DEFAULT_CAP
    output: str = "json"
    out: str | None = None

    def __post_init__(self):
        if self.dimension_cap < 2:
            raise ValueError("dimension cap must be at least 2")


class CommandFailed(Exception):
    """Carries a report and exit code out of a subcommand."""

    def __init__(self, code, report):
        self.code = code
        self.report = report


def _read_matrix(path):
    if path.startswith("fixture:"):
        return fixtures.load(path.split(":", 1)[1])
    with open(path) as fh:
        return ser.matrix_from_json(json.load(fh))


def _load_corr(path, cfg):
    return correlation.validate(_read_matrix(path), cfg.tol)


def _residual(a, b):
    return float(np.abs(np.asarray(a) - np.asarray(b)).max())


def cmd_validate(args, cfg):
    m = _read_matrix(args.path)
    try:
        x = correlation.validate(m, cfg.tol)
    except ValidationError as exc:
        report = {"valid": False, "violation": type(exc).__name__, "detail": str(exc)}
        if hasattr(exc, "index"):
            report["index"] = [int(i) for i in np.atleast_1d(exc.index)]
        if hasattr(exc, "min_eigenvalue"):
            report["min_eigenvalue"] = float(exc.min_eigenvalue)
        raise CommandFailed(EXIT_VALIDATION, report) from exc
    ev = correlation.eigen(x, cfg.tol).eigenvalues
    return {
        "valid": True,
        "n": x.n,
        "is_real": x.is_real,
        "rank": correlation.rank(x, cfg.tol),
        "min_eigenvalue": float(ev[-1]),
    }


def cmd_factor(args, cfg):
    x = _load_corr(args.path, cfg)
    frame = correlation.frame_factor(x, cfg.tol)
    res = _residual(frame.gram(), x.entries)
    report = {
        "r": frame.r,
        "vectors": [ser.vector_to_json(f) for f in frame.vectors.T],
        "gram_residual": res,
    }
    if res > cfg.tol.eps_eq:
        raise CommandFailed(EXIT_INTERNAL, report)
    return report


def cmd_extreme(args, cfg):
    x = _load_corr(args.path, cfg)
    rep = extremality.is_extreme(x, args.real_mode, cfg.tol)
    report = {
        "is_extreme": rep.is_extreme,
        "rank": rep.rank,
        "real_mode": rep.real_mode,
        "rank_bound_satisfied": rep.rank_bound_satisfied,
        "perturbation_dimension": rep.dimension,
        "witness": None if rep.witness is None else ser.matrix_to_json(rep.witness),
    }
    if rep.witness is not None:
        lo, hi = extremality.max_step(x, rep.witness, cfg.tol)
        eps = min(-lo, hi) / 2
        ok = all(mk.is_psd(x.entries + s * eps * rep.witness, cfg.tol) for s in (1, -1))
        report["witness_step"] = eps
        report["witness_verified"] = ok
    if not args.real_mode:
        report["membership"] = moments.classify_extreme_point(x, cfg.tol)
    return report


def cmd_decompose(args, cfg):
    x = _load_corr(args.path, cfg)
    dec = extremality.decompose_extreme(x, args.real_mode, cfg.tol)
    residual = _residual(dec.matrix(), x.entries)
    leaves_ok = all(extremality.is_extreme(t, args.real_mode, cfg.tol).is_extreme for _, t in dec.terms)
    report = ser.decomposition_to_json(dec)
    report.update({
        "term_count": len(dec),
        "ranks": [correlation.rank(t, cfg.tol) for _, t in dec.terms],
        "reconstruction_residual": residual,
        "leaves_extreme": leaves_ok,
    })
    if residual > 1e-8 or not leaves_ok:
        raise CommandFailed(EXIT_INTERNAL, report)
    return report


def cmd_realize(args, cfg):
    x = _load_corr(args.path, cfg)
    t = clifford.realize_real(x, cfg.tol, cfg.dimension_cap)
    residual = _residual(moments.moment_matrix(t, cfg.tol).X.entries, x.entries)
    report = ser.tuple_to_json(t)
    report["moment_residual"] = residual
    if residual > cfg.tol.eps_eq:
        raise CommandFailed(EXIT_INTERNAL, report)
    return report


def cmd_bound(args, cfg):
    x = _load_corr(args.path, cfg)
    cert = bounds.best_lower_bound(x, cfg.tol)
    check = bounds.verify(x, cert, cfg.tol)
    report = cert.to_json()
    report["verification"] = check
    if not check["ok"]:
        raise CommandFailed(EXIT_INTERNAL, report)
    return report


def cmd_verify(args, cfg):
    with open(args.tuple_path) as fh:
        t = ser.tuple_from_json(json.load(fh), cfg.tol)
    x = _load_corr(args.matrix_path, cfg)
    if t.n != x.n:
        raise DimensionMismatch(f"tuple has {t.n} unitaries but the matrix is {x.n} x {x.n}")
    mm = moments.moment_matrix(t, cfg.tol).X
    res = _residual(mm.entries, x.entries)
    kernel = mk.nullspace(x.entries, cfg.tol)
    rel = [moments.kernel_relation_residual(t, c, cfg.tol) for c in kernel.T]
    ok = res <= cfg.tol.eps_eq and all(r <= 1e-8 for r in rel)
    report = {"moment_residual": res, "kernel_relation_residuals": rel, "ok": ok}
    if not ok:
        raise CommandFailed(EXIT_VALIDATION, report)
    return report


def cmd_sample(args, cfg):
    t = moments.haar_tuple(args.n, args.k, cfg.seed, cfg.tol)
    mm = moments.moment_matrix(t, cfg.tol).X
    report = ser.tuple_to_json(t)
    report["seed"] = cfg.seed
    report["moment_matrix"] = ser.matrix_to_json(mm.entries)
    return report


def cmd_refute_f6(args, cfg):
    x = _read_matrix(args.path)
    cert = moments.refute_commuting_prop36(x, cfg.tol)
    report = cert.to_json()
    real_x = correlation.validate(x, cfg.tol)
    rep = extremality.is_extreme(real_x, True, cfg.tol)
    t = clifford.realize_real(real_x, cfg.tol, cfg.dimension_cap)
    report["real_extreme"] = rep.is_extreme
    report["rank"] = rep.rank
    report["clifford_k"] = t.k
    report["clifford_moment_residual"] = _residual(moments.moment_matrix(t, cfg.tol).X.entries, real_x.entries)
    report["clifford_kernel_residuals"] = [
        moments.kernel_relation_residual(t, v, cfg.tol) for v in fixtures.f6_kernel().T
    ]
    if not cert.refuted:
        raise CommandFailed(EXIT_INTERNAL, report)
    return report


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-psd", type=float, default=Tolerance.eps_psd)
    common.add_argument("--tol-rank", type=float, default=Tolerance.eps_rank)
    common.add_argument("--tol-eq", type=float, default=Tolerance.eps_eq)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap", type=int, default=None, help="max Clifford rank r (matrices are 2^r x 2^r)")
    common.add_argument("--output", choices=("json", "pretty"), default="json")
    common.add_argument("--out", default=None, help="write the report to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="unimoments", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, *positional, real_mode=False):
        p = sub.add_parser(name, parents=[common])
        for arg, kw in positional:
            p.add_argument(arg, **kw)
        if real_mode:
            p.add_argument("--real-mode", "--real", dest="real_mode", action="store_true")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, ("path", {}))
    add("factor", cmd_factor, ("path", {}))
    add("extreme", cmd_extreme, ("path", {}), real_mode=True)
    add("decompose", cmd_decompose, ("path", {}), real_mode=True)
    add("realize", cmd_realize, ("path", {}), real_mode=True)
    add("bound", cmd_bound, ("path", {}))
    add("verify", cmd_verify, ("tuple_path", {}), ("matrix_path", {}))
    add("sample", cmd_sample, ("n", {"type": int}), ("k", {"type": int}))
    add("refute-f6", cmd_refute_f6, ("path", {"nargs": "?", "default": "fixture:f6"}))
    return parser


def _emit(report, cfg):
    text = ser.dumps(report, pretty=cfg.output == "pretty")
    if cfg.out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(cfg.out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".unimoments-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, cfg.out)


def main(argv=None):
    args = build_parser().parse_args(argv)
    cap = args.cap if args.cap is not None else clifford.dimension_cap()
    try:
        cfg = CliConfig(Tolerance(args.tol_psd, args.tol_rank, args.tol_eq), args.seed, cap, args.output, args.out)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    code = EXIT_OK
    try:
        report = args.func(args, cfg)
    except CommandFailed as exc:
        report, code = exc.report, exc.code
    except (OSError, json.JSONDecodeError) as exc:
        report, code = {"error": type(exc).__name__, "detail": str(exc)}, EXIT_IO
    except ValidationError as exc:
        report, code = {"error": type(exc).__name__, "detail": str(exc)}, EXIT_VALIDATION
    except DomainError as exc:
        report, code = {"error": type(exc).__name__, "detail": str(exc)}, EXIT_DOMAIN
    except ResourceError as exc:
        report, code = {"error": type(exc).__name__, "detail": str(exc)}, EXIT_RESOURCE
    except NumericalError as exc:
        report, code = {"error": type(exc).__name__, "detail": str(exc)}, EXIT_INTERNAL
    except ValueError as exc:  # malformed JSON structure
        report, code = {"error": "ParseError", "detail": str(exc)}, EXIT_IO
    report = {"command": args.command, "exit_code": code, **report}
    _emit(report, cfg)
    return code


if __name__ == "__main__":
    sys.exit(main())
