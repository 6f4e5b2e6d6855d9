"""Levi-Civita geometry at a point: Christoffel symbols, curvature, F, grad F, Nijenhuis.

Index conventions (all arrays, derivative axes first):

* ``gamma[k, i, j]`` is Gamma^k_ij with nabla_{e_i} e_j = Gamma^k_ij e_k;
  ``dgamma[m, k, i, j]`` is d_m Gamma^k_ij.
* ``R[i, j, k, l] = g(R(e_i, e_j) e_k, e_l)`` with
  R(x, y) = [nabla_x, nabla_y] - nabla_[x,y]. On the unit sphere this gives
  R = g(y,z)g(x,w) - g(x,z)g(y,w) and scalar curvature +2.
* ``nabla_P[i, k, j]`` is (nabla_i P)^k_j; ``F[i, j, k] = g((nabla_i P) e_j, e_k)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .manifold import PointFrame
from .tensor import DenseTensor, MetricPair, act, contract, cyclic_sum_3


def normalized(residual: float, *operands) -> float:
    """Scale-free residual r / (1 + max |operand|)."""
    scale = max((float(np.max(np.abs(op))) if np.size(op) else 0.0 for op in operands), default=0.0)
    return float(residual) / (1.0 + scale)


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


@dataclass(frozen=True, eq=False)
class LeviCivitaData:
    gamma: np.ndarray
    dgamma: np.ndarray
    dg_inv: np.ndarray


@dataclass(frozen=True, eq=False)
class CurvatureData:
    R: np.ndarray
    ricci: np.ndarray
    tau: float
    ricci_star: np.ndarray
    tau_star: float
    tau_star2: float  # the doubly twisted trace g^ij g^ks R(e_i, e_k, P e_s, P e_j)


@dataclass(frozen=True, eq=False)
class StructureTensors:
    nabla_P: np.ndarray
    d_nabla_P: np.ndarray  # d_h (nabla_i P)^k_j as [h, i, k, j]
    F: np.ndarray
    N: np.ndarray  # N[i, j, l] = g(N(e_i, e_j), e_l)
    norm_nabla_P: float


def christoffel(frame: PointFrame) -> LeviCivitaData:
    g_inv, dg, ddg = frame.g_inv, frame.dg, frame.ddg
    # first-kind symbols [l, i, j] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    first = 0.5 * (
        np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg
    )
    dfirst = 0.5 * (
        np.einsum("mijl->mlij", ddg) + np.einsum("mjil->mlij", ddg) - ddg
    )
    gamma = np.einsum("kl,lij->kij", g_inv, first)
    dg_inv = -np.einsum("ka,mab,bl->mkl", g_inv, dg, g_inv)
    dgamma = np.einsum("mkl,lij->mkij", dg_inv, first) + np.einsum("kl,mlij->mkij", g_inv, dfirst)
    # symmetric in the lower pair up to rounding; make it exact
    gamma = 0.5 * (gamma + gamma.transpose(0, 2, 1))
    dgamma = 0.5 * (dgamma + dgamma.transpose(0, 1, 3, 2))
    return LeviCivitaData(gamma, dgamma, dg_inv)


def metric_compatibility(gamma: np.ndarray, g: np.ndarray, dg: np.ndarray) -> np.ndarray:
    """(nabla_a g)_ij for the connection with coefficients ``gamma``."""
    return dg - np.einsum("sai,sj->aij", gamma, g) - np.einsum("saj,is->aij", gamma, g)


def curvature_from_connection(gamma: np.ndarray, dgamma: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Fully covariant curvature of any linear connection given in a coordinate chart.

    R_ijkl = g_lm (d_i G^m_jk - d_j G^m_ik + G^m_is G^s_jk - G^m_js G^s_ik).
    Torsion is allowed: no symmetry of ``gamma`` is assumed.
    """
    up = (
        np.einsum("imjk->mijk", dgamma)
        - np.einsum("jmik->mijk", dgamma)
        + np.einsum("mis,sjk->mijk", gamma, gamma)
        - np.einsum("mjs,sik->mijk", gamma, gamma)
    )
    return np.einsum("lm,mijk->ijkl", g, up)


def ricci_traces(L: np.ndarray, metric: MetricPair, P: np.ndarray):
    """(rho, tau, rho*, tau*, tau**) of a rank-4 covariant tensor L.

    rho(y,z) = g^ij L(e_i,y,z,e_j), rho*(y,z) = g^ij L(e_i,y,z,Pe_j),
    tau** = g^ij g^ks L(e_i,e_k,Pe_s,Pe_j).
    """
    t = DenseTensor.covariant(L)
    rho = contract(t, 0, 3, metric)
    tau = contract(rho, 0, 1, metric).scalar()
    rho_star = contract(act(t, 3, P), 0, 3, metric)
    tau_star = contract(rho_star, 0, 1, metric).scalar()
    twisted = act(act(t, 2, P), 3, P)
    tau_star2 = contract(contract(twisted, 0, 3, metric), 0, 1, metric).scalar()
    return rho.components, tau, rho_star.components, tau_star, tau_star2


def riemann(lc: LeviCivitaData, frame: PointFrame) -> CurvatureData:
    R = curvature_from_connection(lc.gamma, lc.dgamma, frame.g)
    metric = MetricPair(frame.g, frame.g_inv)
    rho, tau, rho_star, tau_star, tau_star2 = ricci_traces(R, metric, frame.P)
    return CurvatureData(R, rho, tau, rho_star, tau_star, tau_star2)


def twist(L: np.ndarray, *slots: int, P: np.ndarray) -> np.ndarray:
    """Components of L with P fed into the given covariant slots."""
    out = DenseTensor.covariant(L)
    for s in slots:
        out = act(out, s, P)
    return np.array(out.components)


def structure_tensors(frame: PointFrame, lc: LeviCivitaData) -> StructureTensors:
    g, g_inv, P, dP, ddP = frame.g, frame.g_inv, frame.P, frame.dP, frame.ddP
    gamma, dgamma = lc.gamma, lc.dgamma
    nP = dP + np.einsum("kis,sj->ikj", gamma, P) - np.einsum("sij,ks->ikj", gamma, P)
    dnP = (
        ddP
        + np.einsum("hkis,sj->hikj", dgamma, P)
        + np.einsum("kis,hsj->hikj", gamma, dP)
        - np.einsum("hsij,ks->hikj", dgamma, P)
        - np.einsum("sij,hks->hikj", gamma, dP)
    )
    F = np.einsum("ks,isj->ijk", g, nP)
    n_up = (
        np.einsum("iks,sj->ijk", nP, P)
        - np.einsum("si,skj->ijk", P, nP)
        + np.einsum("jks,si->ijk", nP, P)
        - np.einsum("sj,ski->ijk", P, nP)
    )
    N = np.einsum("lk,ijk->ijl", g, n_up)
    norm = float(np.einsum("ij,ks,ab,iak,jbs->", g_inv, g_inv, g, nP, nP))
    return StructureTensors(nP, dnP, F, N, norm)


def swapped_norm(st: StructureTensors, frame: PointFrame) -> float:
    """g^ij g^ks g((nabla_i P) e_k, (nabla_s P) e_j)."""
    g, g_inv = frame.g, frame.g_inv
    return float(np.einsum("ij,ks,ab,iak,sbj->", g_inv, g_inv, g, st.nabla_P, st.nabla_P))


def nabla_F(frame: PointFrame, lc: LeviCivitaData, st: StructureTensors) -> np.ndarray:
    """(nabla_h F)_ijk as [h, i, j, k]."""
    gamma, F = lc.gamma, st.F
    dF = np.einsum("hks,isj->hijk", frame.dg, st.nabla_P) + np.einsum(
        "ks,hisj->hijk", frame.g, st.d_nabla_P
    )
    return (
        dF
        - np.einsum("shi,sjk->hijk", gamma, F)
        - np.einsum("shj,isk->hijk", gamma, F)
        - np.einsum("shk,ijs->hijk", gamma, F)
    )


def ricci_identity_residual(nF: np.ndarray, cd: CurvatureData, P: np.ndarray) -> np.ndarray:
    """(nabla_x F)(y,z,w) - (nabla_y F)(x,z,w) - R(x,y,Pz,w) + R(x,y,z,Pw)."""
    R = cd.R
    return nF - nF.transpose(1, 0, 2, 3) - twist(R, 2, P=P) + twist(R, 3, P=P)


def f_symmetry_residuals(F: np.ndarray, P: np.ndarray) -> dict[str, float]:
    """The three identities F(x,y,z)=F(x,z,y), F(x,y,z)=-F(x,Py,Pz), F(x,y,Pz)=-F(x,Py,z)."""
    FPP = np.einsum("iab,aj,bk->ijk", F, P, P)
    Fz = np.einsum("ijb,bk->ijk", F, P)
    Fy = np.einsum("iak,aj->ijk", F, P)
    return {
        "yz": normalized(max_abs(F - F.transpose(0, 2, 1)), F),
        "anti_P": normalized(max_abs(F + FPP), F),
        "mixed": normalized(max_abs(Fz + Fy), F),
    }


def nijenhuis_via_F(F: np.ndarray, P: np.ndarray) -> np.ndarray:
    """g(N(x,y),z) = F(x,Py,z) - F(Px,y,z) + F(y,Px,z) - F(Py,x,z), assembled from F alone."""
    return (
        np.einsum("isk,sj->ijk", F, P)
        - np.einsum("si,sjk->ijk", P, F)
        + np.einsum("jsk,si->ijk", F, P)
        - np.einsum("sj,sik->ijk", P, F)
    )


def cyclic_sum_F(F: np.ndarray) -> np.ndarray:
    return F + np.einsum("jki->ijk", F) + np.einsum("kij->ijk", F)


def curvature_like_residuals(L: np.ndarray) -> tuple[float, float]:
    """(antisymmetry, first Bianchi) residuals, normalized."""
    anti = max(max_abs(L + L.transpose(1, 0, 2, 3)), max_abs(L + L.transpose(0, 1, 3, 2)))
    return normalized(anti, L), normalized(max_abs(cyclic_sum_3(L)), L)


__all__ = [
    "CurvatureData",
    "LeviCivitaData",
    "StructureTensors",
    "christoffel",
    "curvature_from_connection",
    "curvature_like_residuals",
    "cyclic_sum_F",
    "f_symmetry_residuals",
    "metric_compatibility",
    "nabla_F",
    "nijenhuis_via_F",
    "normalized",
    "ricci_identity_residual",
    "ricci_traces",
    "riemann",
    "structure_tensors",
    "swapped_norm",
    "twist",
]
