"""Registry of shipped chart fixtures and their expected class flags.

Each expectation carries a provenance tag:

* ``analytic``: forced by a hand argument (flat metric, parallel P, F = 0 ...);
* ``computed``: recorded from a harness run and frozen here as a regression pin.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib.resources import files

from ..manifold import ManifoldSpec, load_spec

ANALYTIC = "analytic"
COMPUTED = "computed"


@dataclass(frozen=True)
class Expect:
    flag: bool
    provenance: str


@dataclass(frozen=True)
class Fixture:
    name: str
    description: str
    expected: tuple[dict[str, Expect], ...]  # one mapping per sample point

    def spec(self) -> ManifoldSpec:
        return load_spec(self.text())

    def text(self) -> str:
        return files("papm.fixtures").joinpath(f"{self.name}.json").read_text(encoding="utf-8")

    def path(self):
        return files("papm.fixtures").joinpath(f"{self.name}.json")


def _flags(w0, w3, l1, l2, *, prov=ANALYTIC, **override) -> dict[str, Expect]:
    """Expectation map; ``override`` gives per-flag provenance, e.g. W3=COMPUTED."""
    values = {"W0": w0, "W3": w3, "L1": l1, "L2": l2}
    return {k: Expect(v, override.get(k, prov)) for k, v in values.items()}


FIXTURES: tuple[Fixture, ...] = (
    Fixture(
        "flat_product",
        "R^4 with g = I and P = diag(1, 1, -1, -1); the parallel (W0) case",
        (_flags(True, True, True, True),) * 2,
    ),
    Fixture(
        "rotating_2d",
        "R^2 with g = I and P a reflection rotating with x1; flat but ||nabla P|| = 2",
        (_flags(False, False, True, True, W3=COMPUTED),) * 3,
    ),
    Fixture(
        "rotating_4d",
        "R^4 with g = I and two rotating reflection blocks, angles x3 and x1; flat, K = 0",
        (_flags(False, False, True, True, W3=COMPUTED),) * 3,
    ),
    Fixture(
        "warped",
        "g = diag(1, 1, 1 + x1^2, 1 + x1^2), P = diag(1, 1, -1, -1); curved, F = 0 only on x1 = 0",
        (
            _flags(True, True, False, True, L1=COMPUTED, L2=COMPUTED),
            _flags(False, False, False, True, prov=COMPUTED),
            _flags(False, False, False, True, prov=COMPUTED),
        ),
    ),
    Fixture(
        "sphere_patch",
        "unit sphere in (theta, phi) with P = diag(1, -1); pins the curvature sign (tau = 2)",
        (_flags(False, False, False, True, prov=COMPUTED),) * 4,
    ),
    Fixture(
        "sphere_mixed",
        "unit sphere with a P that mixes the two coordinate directions",
        (_flags(False, False, False, True, prov=COMPUTED),) * 3,
    ),
    Fixture(
        "sphere_product",
        "S^2 x S^2 with the product structure; P parallel, H = 2R",
        (_flags(True, True, True, True),) * 2,
    ),
    Fixture(
        "heisenberg_w3",
        "left-invariant structure on H3 x R: W3 and L2 with ||nabla P|| = 4, R' a P-tensor",
        (_flags(False, True, False, True, L1=COMPUTED, L2=COMPUTED),) * 3,
    ),
)

BY_NAME = {f.name: f for f in FIXTURES}


def get(name: str) -> Fixture:
    try:
        return BY_NAME[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(BY_NAME)}") from None
