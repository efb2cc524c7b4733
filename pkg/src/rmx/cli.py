"""Command-line front end: ``rmx eval``, ``rmx check``, ``rmx scan``.

Exit codes: 0 success, 1 failed check or convergence violation, 2 usage,
domain or pole error, 3 non-convergent truncation or quadrature.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConvergenceViolation, DomainError, NonConvergent, PoleError
from .qproducts import ScalarParams
from .suite import SUITES, run_suite, convergence_table
from .theta import DEFAULT_TOL, TruncationControl
from .trig import DegenerateParams, r_dy, r_q
from .twist import twist_f
from .znmatrix import s_full, sbar_sum

SCHEMA_VERSION = "1.0"
KINDS = ("sbar", "s_full", "r_dy", "r_q", "twist_f")
INDEX_CONVENTION = "row (i,j) lower pair, column (k,l) upper pair, composite index i*n+j, 0-based"

_COMPLEX = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?([+-](\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)?i?$")


def parse_complex(text: str) -> complex:
    """Parse ``a``, ``bi``, ``a+bi`` or ``a-bi`` (no spaces)."""
    s = text.strip()
    if " " in s:
        raise argparse.ArgumentTypeError(f"no spaces allowed in complex number {text!r}")
    if s in ("i", "+i", "-i"):
        return complex(0, -1 if s.startswith("-") else 1)
    if re.fullmatch(r".*[+-]i", s):
        s = s[:-1] + "1i"
    try:
        return complex(s.replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _enc(x):
    x = complex(x)
    return {"re": x.real, "im": x.imag}


def _dec(d):
    return complex(d["re"], d["im"])


def default_control() -> TruncationControl:
    tol = os.environ.get("RMX_DEFAULT_TOL")
    return TruncationControl(tol=float(tol)) if tol else TruncationControl(tol=DEFAULT_TOL)


def matrix_document(kind, n, params, matrix, ctrl, seed=None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "n": n,
        "params": {k: (_enc(v) if isinstance(v, complex) else v) for k, v in params.items()},
        "index_convention": INDEX_CONVENTION,
        "matrix": [[_enc(x) for x in row] for row in np.asarray(matrix)],
        "truncation": {"max_terms": ctrl.max_terms, "product_depth": ctrl.product_depth,
                       "tol": ctrl.tol, "pole_floor": ctrl.pole_floor},
        "provenance": {"tool": f"rmx {__version__}", "seed": seed},
    }


def write_document(doc: dict, path) -> None:
    # float repr is the shortest string that round-trips, at most 17 digits
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def read_document(path) -> dict:
    doc = json.loads(Path(path).read_text())
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise DomainError(f"unsupported schema version {doc.get('schema_version')!r}")
    if doc.get("kind") not in KINDS:
        raise DomainError(f"unknown matrix kind {doc.get('kind')!r}")
    doc["matrix"] = np.array([[_dec(x) for x in row] for row in doc["matrix"]], dtype=complex)
    return doc


def evaluate(kind, n, args, ctrl):
    """Build the requested matrix; returns (params, matrix)."""
    if kind == "sbar":
        params = {"z": args.z, "w": args.w, "tau": args.tau}
        return params, sbar_sum(args.z, args.w, args.tau, n, ctrl)
    if kind == "s_full":
        sp = ScalarParams(n=n, w=args.w, tau=args.tau, xi=args.xi)
        params = {"v": args.v, "w": args.w, "tau": args.tau, "xi": args.xi}
        return params, s_full(args.v, sp, ctrl)
    if kind in ("r_dy", "r_q"):
        p = DegenerateParams(n, args.beta, args.xi, args.hbar, include_kappa=not args.no_kappa)
        params = {"beta": args.beta, "xi": args.xi, "hbar": args.hbar, "include_kappa": not args.no_kappa}
        return params, (r_dy if kind == "r_dy" else r_q)(p)
    if kind == "twist_f":
        return {}, twist_f(n).F12
    raise DomainError(f"unknown kind {kind!r}")


def cmd_eval(args) -> int:
    ctrl = default_control()
    params, matrix = evaluate(args.kind, args.n, args, ctrl)
    doc = matrix_document(args.kind, args.n, params, matrix, ctrl)
    if args.out:
        write_document(doc, args.out)
    nnz = int(np.count_nonzero(matrix))
    print(f"{args.kind} n={args.n} max|entry|={np.max(np.abs(matrix)):.17g} nonzero={nnz}")
    return 0


def _parse_tols(items):
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise DomainError(f"tolerance override must be name=value, got {item!r}")
        out[name] = float(value)
    return out


def cmd_check(args) -> int:
    reports = run_suite(args.suite, args.n, args.seed, _parse_tols(args.tol), workers=args.workers)
    if args.report:
        with open(args.report, "w") as fh:
            for r in reports:
                fh.write(json.dumps(r.to_dict()) + "\n")
    failed = [r for r in reports if not r.passed]
    for r in failed:
        print(f"FAIL {r.check_name} draw={r.draw} residual={r.residual:.3e} tol={r.tolerance:.1e}")
    print(f"{len(reports) - len(failed)}/{len(reports)} checks passed")
    return 1 if failed else 0


def cmd_scan(args) -> int:
    p = DegenerateParams(args.n, args.beta, args.xi, args.hbar, include_kappa=False)
    rows = convergence_table(args.kind, p, args.steps)
    fields = ["step", "point_re", "point_im", "error"] + (["scalar_free_error"] if args.kind == "scaling" else [])
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(fields)
        for r in rows:
            line = [r["step"], repr(r["point"].real), repr(r["point"].imag), repr(r["error"])]
            if args.kind == "scaling":
                line.append(repr(r["scalar_free_error"]))
            writer.writerow(line)
    finally:
        if args.out:
            out.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rmx", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"rmx {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate one matrix and write a document")
    ev.add_argument("--kind", choices=KINDS, required=True)
    ev.add_argument("--n", type=int, required=True)
    ev.add_argument("--z", type=parse_complex, default=0j)
    ev.add_argument("--v", type=parse_complex, default=0j)
    ev.add_argument("--w", type=parse_complex, default=0.3j)
    ev.add_argument("--tau", type=parse_complex, default=1.5j)
    ev.add_argument("--xi", type=float, default=1.5)
    ev.add_argument("--beta", type=float, default=0.0)
    ev.add_argument("--hbar", type=float, default=1.0)
    ev.add_argument("--no-kappa", action="store_true")
    ev.add_argument("--out")
    ev.set_defaults(func=cmd_eval)

    ch = sub.add_parser("check", help="run a property suite")
    ch.add_argument("--suite", choices=SUITES + ("all",), default="all")
    ch.add_argument("--n", type=int, default=2)
    ch.add_argument("--seed", type=int, default=0)
    ch.add_argument("--tol", action="append", metavar="NAME=VALUE")
    ch.add_argument("--report")
    ch.add_argument("--workers", type=int, default=1)
    ch.set_defaults(func=cmd_check)

    sc = sub.add_parser("scan", help="tabulate convergence along a limit path")
    sc.add_argument("--kind", choices=("scaling", "ordinary"), required=True)
    sc.add_argument("--n", type=int, default=2)
    sc.add_argument("--beta", type=float, default=0.3)
    sc.add_argument("--xi", type=float, default=1.5)
    sc.add_argument("--hbar", type=float, default=1.0)
    sc.add_argument("--steps", type=int, default=4)
    sc.add_argument("--out")
    sc.set_defaults(func=cmd_scan)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, PoleError) as exc:
        print(f"rmx: error: {exc}", file=sys.stderr)
        return 2
    except NonConvergent as exc:
        print(f"rmx: non-convergent: {exc}", file=sys.stderr)
        return 3
    except ConvergenceViolation as exc:
        print(f"rmx: convergence violation: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"rmx: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
