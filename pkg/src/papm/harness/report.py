"""Assemble the per-point residual report and serialize it deterministically."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .. import __version__
from ..manifold import ManifoldSpec
from ..pconnection import NO_FAULTS, Faults
from .analysis import PointAnalysis, analyze_point
from .checks import CATALOGUE_VERSION, FAIL, NOT_MET, PASS, CheckResult, run_checks

TOOL = "papm"


def _finite(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


@dataclass(frozen=True, eq=False)
class PointReport:
    analysis: PointAnalysis
    checks: list[CheckResult]

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status == FAIL]

    def as_dict(self) -> dict:
        a = self.analysis
        return {
            "index": a.index,
            "point": [float(x) for x in a.frame.point],
            "validation": {k: _finite(v) if isinstance(v, float) else v for k, v in a.validation.as_dict().items()
                           if k != "point"},
            "classes": {
                name: {"flag": bool(c.flag), "residual": _finite(c.residual)}
                for name, c in a.classes.items()
            },
            "scalars": {k: _finite(v) for k, v in a.pcd.scalars.items()},
            "checks": [
                {**c.as_dict(), "residual": _finite(c.residual)} for c in self.checks
            ],
        }


def report_point(spec: ManifoldSpec, index: int, tol: float | None = None, faults: Faults = NO_FAULTS) -> PointReport:
    a = analyze_point(spec, index, tol, faults)
    return PointReport(a, run_checks(a))


def build_report(
    spec: ManifoldSpec,
    tol: float | None = None,
    point: int | None = None,
    faults: Faults = NO_FAULTS,
) -> tuple[dict, list[PointReport]]:
    """Run every check at every selected point; returns (JSON-ready dict, point reports)."""
    indices = range(len(spec.points)) if point is None else [point]
    points = [report_point(spec, i, tol, faults) for i in indices]
    counts = {PASS: 0, FAIL: 0, NOT_MET: 0}
    for p in points:
        for c in p.checks:
            counts[c.status] += 1
    doc = {
        "tool": TOOL,
        "version": __version__,
        "catalogue_version": CATALOGUE_VERSION,
        "spec_digest": spec.digest,
        "tolerance": spec.tolerance if tol is None else tol,
    }
    if faults.active:
        doc["faults"] = {"q_sign": faults.q_sign, "k_scale": faults.k_scale}
    doc["points"] = [p.as_dict() for p in points]
    doc["summary"] = {
        "points": len(points),
        "pass": counts[PASS],
        "fail": counts[FAIL],
        "hypothesis_not_met": counts[NOT_MET],
        "failed_checks": [f"{p.analysis.index}:{c.id}" for p in points for c in p.failures],
    }
    return doc, points


def dumps(doc: dict) -> str:
    """Byte-stable JSON text; key order is the insertion order used above."""
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"
