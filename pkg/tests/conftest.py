import functools
import json

import pytest

from papm.harness.analysis import analyze_point
from papm.harness.fixtures import FIXTURES, get
from papm.manifold import load_spec


@functools.lru_cache(maxsize=None)
def analysis(name: str, index: int):
    return analyze_point(get(name).spec(), index)


def all_points():
    """(fixture name, point index) for every shipped sample point."""
    return [(fx.name, i) for fx in FIXTURES for i in range(len(fx.expected))]


def chart(metric, structure, points, coords=None, **extra):
    n = len(metric)
    doc = {
        "dimension": n,
        "coordinates": coords or [f"x{i + 1}" for i in range(n)],
        "metric": metric,
        "structure": structure,
        "points": points,
        **extra,
    }
    return json.dumps(doc)


@pytest.fixture
def write_chart(tmp_path):
    def _write(text, name="chart.json"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write


def spec_from(metric, structure, points, **kw):
    return load_spec(chart(metric, structure, points, **kw))


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def record_criterion(label: str, ok: bool, detail: str) -> bool:
    line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
