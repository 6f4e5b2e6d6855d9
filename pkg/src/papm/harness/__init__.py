"""Per-point analysis, the check catalogue, reports, fixtures and the self-test."""

from .analysis import PointAnalysis, analyze_point
from .checks import CATALOGUE, CATALOGUE_VERSION, CHECK_IDS, CheckResult, run_checks
from .report import build_report, dumps

__all__ = [
    "CATALOGUE",
    "CATALOGUE_VERSION",
    "CHECK_IDS",
    "CheckResult",
    "PointAnalysis",
    "analyze_point",
    "build_report",
    "dumps",
    "run_checks",
]
