"""Command line entry point: ``papm validate|classify|report|selftest``."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .expr import DomainError
from .manifold import FormatError, ManifoldSpec, StructureViolation, load_spec, validate_structure
from .pconnection import Faults
from .harness.analysis import analyze_point
from .harness.report import build_report, dumps
from .harness.selftest import run_selftest

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_ERROR = 2

TOL_ENV = "PAPM_TOL"


class UsageError(Exception):
    pass


def _tolerance(args, spec: ManifoldSpec) -> float:
    """--tol, then $PAPM_TOL, then the chart file's own value (default 1e-9)."""
    if args.tol is not None:
        return args.tol
    env = os.environ.get(TOL_ENV)
    if env:
        try:
            tol = float(env)
        except ValueError:
            raise UsageError(f"{TOL_ENV}={env!r} is not a number") from None
        if not tol > 0:
            raise UsageError(f"{TOL_ENV} must be positive")
        return tol
    return spec.tolerance


def _load(path: str) -> ManifoldSpec:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return load_spec(text)


def _fmt(x) -> str:
    return f"{x:.3e}" if isinstance(x, float) else str(x)


def cmd_validate(args) -> int:
    spec = _load(args.spec)
    tol = _tolerance(args, spec)
    cols = ("metric_symmetry", "involution", "compatibility", "trace", "min_eigenvalue")
    print(f"tolerance {tol:g}")
    print("point  " + "  ".join(f"{c:>15}" for c in cols) + "  status")
    ok = True
    for i, point in enumerate(spec.points):
        rep = validate_structure(spec, point, tol)
        d = rep.as_dict()
        ok &= rep.passed
        print(f"{i:>5}  " + "  ".join(f"{_fmt(d[c]):>15}" for c in cols) + f"  {d['status']}")
        for failure in rep.failures():
            print(f"       {failure}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_classify(args) -> int:
    spec = _load(args.spec)
    tol = _tolerance(args, spec)
    names = ("W0", "W3", "L1", "L2", "W3_local")
    print(f"tolerance {tol:g}")
    print("point  " + "  ".join(f"{n:>18}" for n in names))
    for i in range(len(spec.points)):
        a = analyze_point(spec, i, tol)
        cells = [f"{str(a.classes[n].flag):>5} ({a.classes[n].residual:.2e})" for n in names]
        print(f"{i:>5}  " + "  ".join(f"{c:>18}" for c in cells))
    return EXIT_OK


def cmd_report(args) -> int:
    spec = _load(args.spec)
    tol = _tolerance(args, spec)
    if args.point is not None and not 0 <= args.point < len(spec.points):
        raise UsageError(f"--point {args.point} out of range (chart has {len(spec.points)} points)")
    doc, _ = build_report(spec, tol, args.point)
    text = dumps(doc)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    s = doc["summary"]
    print(
        f"{s['points']} point(s): {s['pass']} pass, {s['fail']} fail, "
        f"{s['hypothesis_not_met']} hypothesis_not_met",
        file=sys.stderr,
    )
    for f in s["failed_checks"]:
        print(f"FAIL {f}", file=sys.stderr)
    return EXIT_FAIL if s["fail"] else EXIT_OK


def cmd_selftest(args) -> int:
    faults = Faults(
        q_sign=-1.0 if args.inject == "q-sign" else 1.0,
        k_scale=args.k_scale if args.inject == "k-scale" else 1.0,
    )
    result = run_selftest(faults)
    counts = ", ".join(f"{k} {v}" for k, v in result.counts.items())
    print(f"selftest: {counts} comparisons in {result.seconds:.2f} s")
    if result.ok:
        print("selftest: all pass")
        return EXIT_OK
    first = result.first_failure()
    print(f"selftest: {len(result.failures)} failure(s); first failing check: {first.id}")
    print(f"  {first}")
    return EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="papm", description="Residual checks for Riemannian almost product charts and the P-connection."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_tol(p):
        p.add_argument("spec", help="chart description (JSON)")
        p.add_argument("--tol", type=float, default=None, help=f"tolerance (default: ${TOL_ENV} or the chart file's value)")
        return p

    with_tol(sub.add_parser("validate", help="check the almost product axioms at every sample point"))
    with_tol(sub.add_parser("classify", help="print the W0/W3/L1/L2 flags per point"))
    rp = with_tol(sub.add_parser("report", help="write the full JSON residual report"))
    rp.add_argument("--out", help="output file (default: stdout)")
    rp.add_argument("--point", type=int, default=None, help="only this sample point index")
    st = sub.add_parser("selftest", help="run all fixtures and the oracle suites")
    st.add_argument("--inject", choices=("q-sign", "k-scale"), default=None, help="deliberately corrupt Q or K")
    st.add_argument("--k-scale", type=float, default=1.01, help="factor used by --inject k-scale")
    return parser


COMMANDS = {"validate": cmd_validate, "classify": cmd_classify, "report": cmd_report, "selftest": cmd_selftest}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "tol", None) is not None and not args.tol > 0:
        print("papm: error: --tol must be positive", file=sys.stderr)
        return EXIT_ERROR
    try:
        return COMMANDS[args.command](args)
    except (StructureViolation, UsageError, FormatError, DomainError, OverflowError) as exc:
        print(f"papm: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
