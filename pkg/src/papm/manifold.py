"""Chart descriptions of Riemannian almost product manifolds and their point data."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .expr import (
    DomainError,
    ExprSyntaxError,
    Expression,
    NonLiteralExponent,
    UnknownIdentifier,
    evaluate,
    evaluate_jet2,
    parse_expression,
)
from .tensor import invert_spd

DEFAULT_TOLERANCE = 1e-9


class FormatError(ValueError):
    pass


class OddDimension(FormatError):
    def __init__(self, n: int):
        self.n = n
        super().__init__(
            f"dimension {n} is odd; a trace-free almost product structure needs an "
            "even-dimensional manifold"
        )


class SpecSyntaxError(FormatError):
    """An entry of the metric or structure matrix failed to parse."""

    def __init__(self, location: str, cause: Exception):
        self.location = location
        self.cause = cause
        super().__init__(f"{location}: {cause}")


class StructureViolation(ValueError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__(f"almost product axioms fail at {list(report.point)}: {report.failures()}")


@dataclass(frozen=True, eq=False)
class ManifoldSpec:
    dimension: int
    coordinates: tuple[str, ...]
    metric: tuple[tuple[Expression, ...], ...]
    structure: tuple[tuple[Expression, ...], ...]
    points: tuple[tuple[float, ...], ...]
    tolerance: float = DEFAULT_TOLERANCE
    source: str = field(default="", repr=False)

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.source.encode("utf-8")).hexdigest()


def _matrix(raw, n: int, key: str, coords: Sequence[str]) -> tuple[tuple[Expression, ...], ...]:
    if not isinstance(raw, list) or len(raw) != n or any(
        not isinstance(row, list) or len(row) != n for row in raw
    ):
        raise FormatError(f"{key!r} must be a {n}x{n} array of strings")
    rows = []
    for i, row in enumerate(raw):
        out = []
        for j, text in enumerate(row):
            if isinstance(text, (int, float)) and not isinstance(text, bool):
                text = repr(float(text))
            if not isinstance(text, str):
                raise FormatError(f"{key}[{i}][{j}] must be a string expression")
            try:
                out.append(parse_expression(text, coords))
            except (ExprSyntaxError, UnknownIdentifier, NonLiteralExponent) as exc:
                raise SpecSyntaxError(f"{key}[{i}][{j}]", exc) from exc
        rows.append(tuple(out))
    return tuple(rows)


def load_spec(text: str) -> ManifoldSpec:
    """Parse the JSON chart description.

    Keys: ``dimension``, ``coordinates``, ``metric`` and ``structure``
    (n x n string matrices; structure holds the mixed components P^i_j),
    ``points`` and optional ``tolerance``.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise FormatError("spec must be a JSON object")
    missing = [k for k in ("dimension", "coordinates", "metric", "structure", "points") if k not in data]
    if missing:
        raise FormatError(f"missing keys: {', '.join(missing)}")
    n = data["dimension"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise FormatError("'dimension' must be a positive integer")
    coords = data["coordinates"]
    if (
        not isinstance(coords, list)
        or len(coords) != n
        or not all(isinstance(c, str) for c in coords)
    ):
        raise FormatError(f"'coordinates' must list {n} names")
    if len(set(coords)) != n:
        raise FormatError("coordinate names must be distinct")
    for key in ("metric", "structure"):
        raw = data[key]
        if not isinstance(raw, list) or len(raw) != n or any(
            not isinstance(row, list) or len(row) != n for row in raw
        ):
            raise FormatError(f"{key!r} must be a {n}x{n} array of strings")
    if n % 2:
        raise OddDimension(n)
    try:
        metric = _matrix(data["metric"], n, "metric", coords)
        structure = _matrix(data["structure"], n, "structure", coords)
    except ValueError as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(str(exc)) from exc

    points = data["points"]
    if not isinstance(points, list) or not points:
        raise FormatError("'points' must be a nonempty list")
    parsed_points = []
    for k, p in enumerate(points):
        if (
            not isinstance(p, list)
            or len(p) != n
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in p)
        ):
            raise FormatError(f"points[{k}] must be a list of {n} numbers")
        parsed_points.append(tuple(float(v) for v in p))
    tol = data.get("tolerance", DEFAULT_TOLERANCE)
    if not isinstance(tol, (int, float)) or isinstance(tol, bool) or not tol > 0:
        raise FormatError("'tolerance' must be a positive number")
    return ManifoldSpec(
        dimension=n,
        coordinates=tuple(coords),
        metric=metric,
        structure=structure,
        points=tuple(parsed_points),
        tolerance=float(tol),
        source=text,
    )


def _values(matrix, point) -> np.ndarray:
    return np.array([[evaluate(e, point) for e in row] for row in matrix])


@dataclass(frozen=True)
class ValidationReport:
    point: tuple[float, ...]
    metric_symmetry: float
    involution: float  # max |P^2 - I|
    compatibility: float  # max |P^T g P - g| / (1 + max |g|)
    trace: float  # |tr P|
    min_eigenvalue: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return not self.failures()

    def failures(self) -> list[str]:
        out = [
            name
            for name in ("metric_symmetry", "involution", "compatibility", "trace")
            if not getattr(self, name) <= self.tolerance
        ]
        if not self.min_eigenvalue > self.tolerance:
            out.append("positive_definite")
        return out

    def as_dict(self) -> dict:
        return {
            "metric_symmetry": self.metric_symmetry,
            "involution": self.involution,
            "compatibility": self.compatibility,
            "trace": self.trace,
            "min_eigenvalue": self.min_eigenvalue,
            "tolerance": self.tolerance,
            "status": "pass" if self.passed else "fail",
        }


def validate_structure(spec: ManifoldSpec, point, tol: float | None = None) -> ValidationReport:
    """Residuals of the almost product axioms at one point. Never raises on failure."""
    tol = spec.tolerance if tol is None else tol
    point = tuple(float(v) for v in point)
    if len(point) != spec.dimension:
        raise ValueError(f"point has {len(point)} coordinates, chart has {spec.dimension}")
    g = _values(spec.metric, point)
    P = _values(spec.structure, point)
    n = spec.dimension
    scale = 1.0 + float(np.max(np.abs(g)))
    sym = float(np.max(np.abs(g - g.T))) / scale
    g_sym = 0.5 * (g + g.T)
    return ValidationReport(
        point=point,
        metric_symmetry=sym,
        involution=float(np.max(np.abs(P @ P - np.eye(n)))),
        compatibility=float(np.max(np.abs(P.T @ g_sym @ P - g_sym))) / scale,
        trace=abs(float(np.trace(P))),
        min_eigenvalue=float(np.linalg.eigvalsh(g_sym)[0]),
        tolerance=tol,
    )


@dataclass(frozen=True, eq=False)
class PointFrame:
    """Second-order chart data at one point.

    Derivative axes come first: ``dg[a, i, j] = d_a g_ij``,
    ``ddg[a, b, i, j] = d_a d_b g_ij``; ``P[i, j]`` is P^i_j.
    """

    point: np.ndarray
    g: np.ndarray
    dg: np.ndarray
    ddg: np.ndarray
    g_inv: np.ndarray
    P: np.ndarray
    dP: np.ndarray
    ddP: np.ndarray
    P_lower: np.ndarray

    @property
    def dim(self) -> int:
        return self.g.shape[0]


def _jets(matrix, point):
    n = len(point)
    val = np.empty((n, n))
    d1 = np.empty((n, n, n))
    d2 = np.empty((n, n, n, n))
    for i, row in enumerate(matrix):
        for j, e in enumerate(row):
            jet = evaluate_jet2(e, point)
            val[i, j] = jet.value
            d1[:, i, j] = jet.gradient
            d2[:, :, i, j] = jet.hessian
    return val, d1, d2


def evaluate_frame(spec: ManifoldSpec, point, *, check: bool = True) -> PointFrame:
    """Evaluate g, P and their first and second derivatives at ``point``.

    With ``check`` the axioms are validated first and StructureViolation is
    raised on failure. Expression domain errors propagate as DomainError.
    """
    point = tuple(float(v) for v in point)
    if check:
        report = validate_structure(spec, point)
        if not report.passed:
            raise StructureViolation(report)
    g, dg, ddg = _jets(spec.metric, point)
    # the metric is symmetric up to rounding; store it exactly symmetric
    g = 0.5 * (g + g.T)
    dg = 0.5 * (dg + dg.transpose(0, 2, 1))
    ddg = 0.5 * (ddg + ddg.transpose(0, 1, 3, 2))
    P, dP, ddP = _jets(spec.structure, point)
    g_inv = invert_spd(g)
    frame = PointFrame(
        point=np.array(point),
        g=g,
        dg=dg,
        ddg=ddg,
        g_inv=g_inv,
        P=P,
        dP=dP,
        ddP=ddP,
        P_lower=g @ P,
    )
    for arr in vars(frame).values():
        arr.flags.writeable = False
    return frame


__all__ = [
    "DomainError",
    "FormatError",
    "ManifoldSpec",
    "OddDimension",
    "PointFrame",
    "SpecSyntaxError",
    "StructureViolation",
    "ValidationReport",
    "evaluate_frame",
    "load_spec",
    "validate_structure",
]
