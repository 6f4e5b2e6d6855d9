"""Per-point pipeline: chart data -> Levi-Civita package -> P-connection package."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..geometry import (
    CurvatureData,
    LeviCivitaData,
    StructureTensors,
    christoffel,
    cyclic_sum_F,
    max_abs,
    nabla_F,
    normalized,
    riemann,
    structure_tensors,
)
from ..manifold import (
    ManifoldSpec,
    PointFrame,
    StructureViolation,
    ValidationReport,
    evaluate_frame,
    validate_structure,
)
from ..pconnection import (
    NO_FAULTS,
    ClassFlag,
    Faults,
    PConnectionData,
    PCurvatureData,
    build_p_connection,
    class_tests,
    p_curvature,
)


@dataclass(frozen=True, eq=False)
class PointAnalysis:
    index: int
    validation: ValidationReport
    frame: PointFrame
    lc: LeviCivitaData
    cd: CurvatureData
    st: StructureTensors
    nabla_F: np.ndarray
    pc: PConnectionData
    pcd: PCurvatureData
    classes: dict[str, ClassFlag]
    tolerance: float
    faults: Faults

    @property
    def dim(self) -> int:
        return self.frame.dim


def w3_local(st: StructureTensors, nF: np.ndarray) -> float:
    """Residual of the W3 condition together with its covariant derivative at the point."""
    cyc = cyclic_sum_F(st.F)
    dcyc = nF + np.einsum("hjki->hijk", nF) + np.einsum("hkij->hijk", nF)
    return max(normalized(max_abs(cyc), st.F), normalized(max_abs(dcyc), nF))


def analyze_point(
    spec: ManifoldSpec,
    index: int,
    tol: float | None = None,
    faults: Faults = NO_FAULTS,
) -> PointAnalysis:
    """Run the full pipeline at ``spec.points[index]``.

    Raises StructureViolation when the axioms fail at the point.
    """
    tol = spec.tolerance if tol is None else tol
    point = spec.points[index]
    validation = validate_structure(spec, point, tol)
    if not validation.passed:
        raise StructureViolation(validation)
    frame = evaluate_frame(spec, point, check=False)
    lc = christoffel(frame)
    cd = riemann(lc, frame)
    st = structure_tensors(frame, lc)
    nF = nabla_F(frame, lc, st)
    pc = build_p_connection(frame, lc, st, faults)
    pcd = p_curvature(frame, cd, st, pc, faults)
    classes = class_tests(st, cd, frame.P, tol)
    r = w3_local(st, nF)
    classes["W3_local"] = ClassFlag(r <= tol, r)
    return PointAnalysis(
        index=index,
        validation=validation,
        frame=frame,
        lc=lc,
        cd=cd,
        st=st,
        nabla_F=nF,
        pc=pc,
        pcd=pcd,
        classes=classes,
        tolerance=tol,
        faults=faults,
    )
