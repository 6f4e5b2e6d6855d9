"""The P-connection nabla'_x y = nabla_x y - 1/2 (nabla_x P) P y and its curvature.

Also hosts the tensors K and H, the Riemannian P-tensor predicates, the class
tests (W0, W3, L1, L2), the scalar invariants applied to R', K, H and the
basis pi_1, pi_2, pi_3 used by the four-dimensional decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    CurvatureData,
    LeviCivitaData,
    StructureTensors,
    curvature_from_connection,
    curvature_like_residuals,
    cyclic_sum_F,
    max_abs,
    metric_compatibility,
    normalized,
    ricci_traces,
    twist,
)
from .manifold import PointFrame
from .tensor import MetricPair, cyclic_sum_3


class DimensionNot4(ValueError):
    pass


@dataclass(frozen=True)
class Faults:
    """Deliberate corruptions used to prove the residual checks can fail."""

    q_sign: float = 1.0
    k_scale: float = 1.0

    @property
    def active(self) -> bool:
        return self.q_sign != 1.0 or self.k_scale != 1.0


NO_FAULTS = Faults()


@dataclass(frozen=True, eq=False)
class PConnectionData:
    Q_mixed: np.ndarray  # Q^k_ij as [k, i, j], the same layout as gamma
    Q: np.ndarray  # Q(e_i, e_j, e_k) = g(Q(e_i, e_j), e_k)
    gamma: np.ndarray
    dgamma: np.ndarray
    T: np.ndarray  # T(e_i, e_j, e_k) = g(T(e_i, e_j), e_k)


@dataclass(frozen=True, eq=False)
class PCurvatureData:
    R_direct: np.ndarray
    R_formula: np.ndarray
    K: np.ndarray
    H: np.ndarray
    scalars: dict = field(default_factory=dict)
    ricci_prime: np.ndarray | None = None
    ricci_K: np.ndarray | None = None


def build_p_connection(
    frame: PointFrame, lc: LeviCivitaData, st: StructureTensors, faults: Faults = NO_FAULTS
) -> PConnectionData:
    P, dP, g = frame.P, frame.dP, frame.g
    nP, dnP = st.nabla_P, st.d_nabla_P
    # Q^k_ij = -1/2 (nabla_i P)^k_s P^s_j
    q_mixed = -0.5 * faults.q_sign * np.einsum("iks,sj->kij", nP, P)
    dq_mixed = -0.5 * faults.q_sign * (
        np.einsum("hiks,sj->hkij", dnP, P) + np.einsum("iks,hsj->hkij", nP, dP)
    )
    Q = np.einsum("km,mij->ijk", g, q_mixed)
    T = Q - Q.transpose(1, 0, 2)
    return PConnectionData(
        Q_mixed=q_mixed,
        Q=Q,
        gamma=lc.gamma + q_mixed,
        dgamma=lc.dgamma + dq_mixed,
        T=T,
    )


def q_from_F(F: np.ndarray, P: np.ndarray) -> np.ndarray:
    """Q(y,z,w) = -1/2 F(y,Pz,w)."""
    return -0.5 * np.einsum("isk,sj->ijk", F, P)


def torsion_from_F(F: np.ndarray, P: np.ndarray) -> np.ndarray:
    """T(x,y,z) = -1/2 {F(x,Py,z) - F(y,Px,z)}."""
    FP = np.einsum("isk,sj->ijk", F, P)
    return -0.5 * (FP - FP.transpose(1, 0, 2))


def torsion_cyclic(T: np.ndarray, P: np.ndarray) -> np.ndarray:
    """Cyclic sum over x, y, z of T(x, y, Pz)."""
    TP = np.einsum("ijs,sk->ijk", T, P)
    return cyclic_sum_F(TP)


def naturality_residuals(pc: PConnectionData, frame: PointFrame) -> tuple[np.ndarray, np.ndarray]:
    """(nabla' g, nabla' P) component arrays; both vanish for a natural connection."""
    gp, P = pc.gamma, frame.P
    ng = metric_compatibility(gp, frame.g, frame.dg)
    nP = frame.dP + np.einsum("kas,sj->akj", gp, P) - np.einsum("saj,ks->akj", gp, P)
    return ng, nP


def curvature_direct(pc: PConnectionData, g: np.ndarray) -> np.ndarray:
    return curvature_from_connection(pc.gamma, pc.dgamma, g)


def k_tensor(st: StructureTensors, g: np.ndarray, faults: Faults = NO_FAULTS) -> np.ndarray:
    """K(x,y,z,w) = -g((nabla_x P)z, (nabla_y P)w) + g((nabla_y P)z, (nabla_x P)w)."""
    A = np.einsum("ms,imk,jsl->ijkl", g, st.nabla_P, st.nabla_P)
    return faults.k_scale * (-A + A.transpose(1, 0, 2, 3))


def r_prime_formula(R: np.ndarray, K: np.ndarray, P: np.ndarray) -> np.ndarray:
    """R' = 1/4 {2 R(x,y,z,w) + 2 R(x,y,Pz,Pw) + K(x,y,z,w)}."""
    return 0.25 * (2.0 * R + 2.0 * twist(R, 2, 3, P=P) + K)


def h_tensor(R: np.ndarray, P: np.ndarray) -> np.ndarray:
    """H(x,y,z,w) = R(x,y,z,w) + R(x,y,Pz,Pw)."""
    return R + twist(R, 2, 3, P=P)


@dataclass(frozen=True)
class PTensorResiduals:
    antisymmetry: float
    bianchi: float
    p_compat: float

    def is_curvature_like(self, tol: float) -> bool:
        return self.antisymmetry <= tol and self.bianchi <= tol

    def is_p_tensor(self, tol: float) -> bool:
        return self.is_curvature_like(tol) and self.p_compat <= tol


def p_tensor_check(L: np.ndarray, P: np.ndarray) -> PTensorResiduals:
    anti, bianchi = curvature_like_residuals(L)
    compat = normalized(max_abs(twist(L, 2, 3, P=P) - L), L)
    return PTensorResiduals(anti, bianchi, compat)


@dataclass(frozen=True)
class ClassFlag:
    flag: bool
    residual: float


def class_tests(st: StructureTensors, cd: CurvatureData, P: np.ndarray, tol: float) -> dict[str, ClassFlag]:
    """W0: F = 0.  W3: cyclic sum of F = 0.  L2: cyclic sum of R(x,y,Pz,Pw) = 0.
    L1: R(x,y,Pz,Pw) = R(x,y,z,w)."""
    F, R = st.F, cd.R
    RPP = twist(R, 2, 3, P=P)
    residuals = {
        "W0": normalized(max_abs(F), F),
        "W3": normalized(max_abs(cyclic_sum_F(F)), F),
        "L1": normalized(max_abs(RPP - R), R),
        "L2": normalized(max_abs(cyclic_sum_3(RPP)), R),
    }
    return {name: ClassFlag(r <= tol, r) for name, r in residuals.items()}


def scalar_invariants(L: np.ndarray, metric: MetricPair, P: np.ndarray) -> tuple[float, float, np.ndarray]:
    """(tau(L), tau*(L), rho(L)) with the same trace pattern as for the Riemann tensor."""
    rho, tau, _rho_star, tau_star, _ = ricci_traces(L, metric, P)
    return tau, tau_star, rho


def pi_basis(g: np.ndarray, P: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """pi_1, pi_2, pi_3 built from g and P_ij = g(e_i, P e_j)."""
    Pl = g @ P
    pi1 = np.einsum("jk,il->ijkl", g, g) - np.einsum("ik,jl->ijkl", g, g)
    pi2 = np.einsum("jk,il->ijkl", Pl, Pl) - np.einsum("ik,jl->ijkl", Pl, Pl)
    pi3 = (
        np.einsum("jk,il->ijkl", g, Pl)
        - np.einsum("ik,jl->ijkl", g, Pl)
        + np.einsum("jk,il->ijkl", Pl, g)
        - np.einsum("ik,jl->ijkl", Pl, g)
    )
    return pi1, pi2, pi3


def decomposition_4d(
    H: np.ndarray, g: np.ndarray, P: np.ndarray, tau_H: float, tau_star_H: float, sign: float = 1.0
) -> float:
    """Normalized max |H - nu (pi_1 + sign pi_2) - nu* pi_3| with nu = tau(H)/8, nu* = tau*(H)/8.

    ``sign=+1`` is the combination that is invariant under P in the last two
    slots; ``sign=-1`` reproduces the anti-invariant one for comparison.
    """
    if H.shape[0] != 4:
        raise DimensionNot4(f"decomposition needs dimension 4, got {H.shape[0]}")
    pi1, pi2, pi3 = pi_basis(g, P)
    model = tau_H / 8.0 * (pi1 + sign * pi2) + tau_star_H / 8.0 * pi3
    return normalized(max_abs(H - model), H, model)


def p_curvature(
    frame: PointFrame,
    cd: CurvatureData,
    st: StructureTensors,
    pc: PConnectionData,
    faults: Faults = NO_FAULTS,
) -> PCurvatureData:
    g, P = frame.g, frame.P
    metric = MetricPair(frame.g, frame.g_inv)
    K = k_tensor(st, g, faults)
    R_direct = curvature_direct(pc, g)
    R_formula = r_prime_formula(cd.R, K, P)
    H = h_tensor(cd.R, P)
    tau_p, tau_p_star, rho_p = scalar_invariants(R_direct, metric, P)
    tau_K, tau_K_star, rho_K = scalar_invariants(K, metric, P)
    tau_H, tau_H_star, _ = scalar_invariants(H, metric, P)
    scalars = {
        "tau": cd.tau,
        "tau_star": cd.tau_star,
        "tau_star2": cd.tau_star2,
        "tau_prime": tau_p,
        "tau_prime_star": tau_p_star,
        "tau_K": tau_K,
        "tau_K_star": tau_K_star,
        "tau_H": tau_H,
        "tau_H_star": tau_H_star,
        "nu_H": tau_H / 8.0,
        "nu_H_star": tau_H_star / 8.0,
        "norm_nabla_P": st.norm_nabla_P,
    }
    return PCurvatureData(
        R_direct=R_direct,
        R_formula=R_formula,
        K=K,
        H=H,
        scalars=scalars,
        ricci_prime=rho_p,
        ricci_K=rho_K,
    )


__all__ = [
    "ClassFlag",
    "DimensionNot4",
    "Faults",
    "NO_FAULTS",
    "PConnectionData",
    "PCurvatureData",
    "PTensorResiduals",
    "build_p_connection",
    "class_tests",
    "curvature_direct",
    "decomposition_4d",
    "h_tensor",
    "k_tensor",
    "naturality_residuals",
    "p_curvature",
    "p_tensor_check",
    "pi_basis",
    "q_from_F",
    "r_prime_formula",
    "scalar_invariants",
    "torsion_cyclic",
    "torsion_from_F",
]
