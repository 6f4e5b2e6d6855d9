"""Self-test: every shipped fixture through the report pipeline plus the two oracle suites."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ..expr import evaluate_jet2, finite_difference_jet2
from ..geometry import max_abs
from ..oracles import contract_loops, k_tensor_loops, l1_residual_loops, norm_nabla_p_loops, traces_loops
from ..pconnection import NO_FAULTS, Faults
from .analysis import PointAnalysis
from .checks import CHECK_IDS
from .fixtures import FIXTURES, Fixture
from .report import build_report

AD_FD_TOL = 1e-6
LOOP_TOL = 1e-12


@dataclass(frozen=True)
class Finding:
    suite: str  # "report", "flags", "ad_fd" or "loops"
    where: str
    id: str
    residual: float
    tolerance: float

    def __str__(self) -> str:
        return f"[{self.suite}] {self.where} {self.id}: residual {self.residual:.3e} > {self.tolerance:.1e}"


@dataclass
class SelftestResult:
    failures: list[Finding] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def first_failure(self) -> Finding | None:
        """The failing report check earliest in the catalogue, else the first oracle failure."""
        report = [f for f in self.failures if f.suite == "report"]
        if report:
            return min(report, key=lambda f: CHECK_IDS.index(f.id))
        return self.failures[0] if self.failures else None

    def _count(self, suite: str, k: int = 1) -> None:
        self.counts[suite] = self.counts.get(suite, 0) + k


def _rel(a: float, b: float) -> float:
    return abs(a - b) / (1.0 + abs(a))


def ad_fd_suite(fx: Fixture, result: SelftestResult) -> None:
    spec = fx.spec()
    entries = [
        (f"{name}[{i}][{j}]", e)
        for name, matrix in (("metric", spec.metric), ("structure", spec.structure))
        for i, row in enumerate(matrix)
        for j, e in enumerate(row)
    ]
    for p, point in enumerate(spec.points):
        for label, e in entries:
            ad = evaluate_jet2(e, point)
            fd = finite_difference_jet2(e, point)
            for part in ("gradient", "hessian"):
                a, b = getattr(ad, part), getattr(fd, part)
                r = float(np.max(np.abs(a - b) / (1.0 + np.abs(a)))) if a.size else 0.0
                result._count("ad_fd")
                if r > AD_FD_TOL:
                    result.failures.append(Finding("ad_fd", f"{fx.name}:{p}", f"{label}.{part}", r, AD_FD_TOL))


def loop_suite(fx: Fixture, a: PointAnalysis, result: SelftestResult) -> None:
    g, g_inv, P = a.frame.g, a.frame.g_inv, a.frame.P
    s = a.pcd.scalars
    pairs = []
    for label, L, keys in (
        ("R", a.cd.R, ("tau", "tau_star", None)),
        ("Rprime", a.pcd.R_direct, ("tau_prime", "tau_prime_star", None)),
        ("K", a.pcd.K, ("tau_K", "tau_K_star", None)),
        ("H", a.pcd.H, ("tau_H", "tau_H_star", None)),
    ):
        loops = traces_loops(L, g_inv, P)
        for key, value in zip(keys, loops):
            if key is not None:
                pairs.append((f"{label}.{key}", s[key], value))
    pairs.append(("R.tau_star2", a.cd.tau_star2, traces_loops(a.cd.R, g_inv, P)[2]))
    pairs.append(("norm_nabla_P", s["norm_nabla_P"], norm_nabla_p_loops(a.st.nabla_P, g, g_inv)))
    pairs.append(("class.L1", a.classes["L1"].residual, l1_residual_loops(a.cd.R, P)))
    ricci = contract_loops(a.cd.R, 0, 3, g_inv)
    pairs.append(("R.ricci", 0.0, max(abs(a.cd.ricci[k] - v) / (1.0 + abs(v)) for k, v in ricci.items())))
    K = np.array(k_tensor_loops(a.st.nabla_P, g)) * a.faults.k_scale
    pairs.append(("K.components", 0.0, max_abs(a.pcd.K - K) / (1.0 + max_abs(K))))
    where = f"{fx.name}:{a.index}"
    for label, lib, loop in pairs:
        r = _rel(lib, loop)
        result._count("loops")
        if r > LOOP_TOL:
            result.failures.append(Finding("loops", where, label, r, LOOP_TOL))


def run_selftest(faults: Faults = NO_FAULTS, fixtures=FIXTURES) -> SelftestResult:
    start = time.perf_counter()
    result = SelftestResult()
    for fx in fixtures:
        spec = fx.spec()
        _, points = build_report(spec, faults=faults)
        for pr in points:
            a = pr.analysis
            where = f"{fx.name}:{a.index}"
            for c in pr.checks:
                result._count("report")
                if c.status == "fail":
                    r = float("nan") if c.residual is None else c.residual
                    result.failures.append(Finding("report", where, c.id, r, c.tolerance))
            for name, exp in fx.expected[a.index].items():
                got = a.classes[name]
                result._count("flags")
                if got.flag != exp.flag:
                    result.failures.append(
                        Finding("flags", where, f"class.{name}({exp.provenance})", got.residual, a.tolerance)
                    )
            loop_suite(fx, a, result)
        ad_fd_suite(fx, result)
    result.seconds = time.perf_counter() - start
    return result
