"""The versioned check catalogue.

Every check computes one normalized residual at a point and compares it with
a fixed tolerance. Checks that hold only under hypotheses name their gates;
when a gate fails the status is ``hypothesis_not_met`` and the residual is
still reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..geometry import (
    curvature_like_residuals,
    f_symmetry_residuals,
    max_abs,
    metric_compatibility,
    nijenhuis_via_F,
    normalized,
    ricci_identity_residual,
    swapped_norm,
    twist,
)
from ..pconnection import (
    decomposition_4d,
    naturality_residuals,
    p_tensor_check,
    pi_basis,
    q_from_F,
    torsion_cyclic,
    torsion_from_F,
)
from ..tensor import cyclic_sum_3
from .analysis import PointAnalysis

CATALOGUE_VERSION = "1"

PASS = "pass"
FAIL = "fail"
NOT_MET = "hypothesis_not_met"

# tolerance tiers
EXACT = 0.0
ALGEBRAIC = 1e-10  # first-derivative data only
FIRST_ORDER = 1e-9
SECOND_ORDER = 1e-8  # curvature, grad F and anything built on them

GATES: dict[str, Callable[[PointAnalysis], bool]] = {
    "W3": lambda a: a.classes["W3"].flag,
    "W3_local": lambda a: a.classes["W3_local"].flag,
    "L1": lambda a: a.classes["L1"].flag,
    "L2": lambda a: a.classes["L2"].flag,
    "Rprime_P_tensor": lambda a: p_tensor_check(a.pcd.R_direct, a.frame.P).is_p_tensor(a.tolerance),
    "H_P_tensor": lambda a: p_tensor_check(a.pcd.H, a.frame.P).is_p_tensor(a.tolerance),
    "dim4": lambda a: a.dim == 4,
}


@dataclass(frozen=True)
class Check:
    id: str
    description: str
    tolerance: float | Callable[[float], float]
    compute: Callable[[PointAnalysis], float | None]
    gates: tuple[str, ...] = ()

    def tolerance_for(self, a: PointAnalysis) -> float:
        return self.tolerance(a.tolerance) if callable(self.tolerance) else self.tolerance


@dataclass(frozen=True)
class CheckResult:
    id: str
    residual: float | None
    tolerance: float
    status: str
    gates: tuple[str, ...]
    unmet: tuple[str, ...]

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "status": self.status,
            "gates": list(self.gates),
            "unmet": list(self.unmet),
        }


def _scalar_rel(value: float, *terms: float) -> float:
    return abs(value) / (1.0 + max((abs(t) for t in terms), default=0.0))


def _s(a: PointAnalysis) -> dict:
    return a.pcd.scalars


# -- residual functions ---------------------------------------------------


def _lc_symmetry(a):
    return max_abs(a.lc.gamma - a.lc.gamma.transpose(0, 2, 1))


def _lc_metric(a):
    return normalized(max_abs(metric_compatibility(a.lc.gamma, a.frame.g, a.frame.dg)), a.frame.dg)


def _ricci_identity(a):
    return normalized(max_abs(ricci_identity_residual(a.nabla_F, a.cd, a.frame.P)), a.nabla_F, a.cd.R)


def _f_sym(name):
    return lambda a: f_symmetry_residuals(a.st.F, a.frame.P)[name]


def _nijenhuis(a):
    return normalized(max_abs(a.st.N - nijenhuis_via_F(a.st.F, a.frame.P)), a.st.N)


def _norm_consistency(a):
    gi = a.frame.g_inv
    via_F = float(np.einsum("ij,ks,ab,ika,jsb->", gi, gi, gi, a.st.F, a.st.F))
    n = a.st.norm_nabla_P
    return _scalar_rel(n - via_F, n, via_F) + max(0.0, -n)


def _curvature_form(a):
    return normalized(max_abs(a.pcd.R_direct - a.pcd.R_formula), a.pcd.R_direct)


def _p_tensor_part(which, part):
    def f(a):
        L = a.pcd.R_direct if which == "R'" else a.pcd.K
        return getattr(p_tensor_check(L, a.frame.P), part)

    return f


def _p_tensor_criterion(a):
    P, R = a.frame.P, a.cd.R
    lhs = cyclic_sum_3(a.pcd.R_direct)
    rhs = 0.25 * (2.0 * cyclic_sum_3(twist(R, 2, 3, P=P)) + cyclic_sum_3(a.pcd.K))
    return normalized(max_abs(lhs - rhs), a.pcd.R_direct, R, a.pcd.K)


def _l2_k_criterion(a):
    return normalized(
        max_abs(cyclic_sum_3(a.pcd.R_direct) - 0.25 * cyclic_sum_3(a.pcd.K)), a.pcd.R_direct, a.pcd.K
    )


def _h_p_tensor(a):
    r = p_tensor_check(a.pcd.H, a.frame.P)
    return max(r.antisymmetry, r.bianchi, r.p_compat)


def _q_antisymmetry(a):
    Q = a.pc.Q
    return normalized(max_abs(Q + Q.transpose(0, 2, 1)), Q)


def _q_dual(a):
    return normalized(max_abs(a.pc.Q - q_from_F(a.st.F, a.frame.P)), a.pc.Q)


def _torsion_anti(a):
    T = a.pc.T
    return max_abs(T + T.transpose(1, 0, 2))


def _torsion_formula(a):
    return normalized(max_abs(a.pc.T - torsion_from_F(a.st.F, a.frame.P)), a.pc.T)


def _torsion_cyclic(a):
    return normalized(max_abs(torsion_cyclic(a.pc.T, a.frame.P)), a.pc.T)


def _natural(which):
    def f(a):
        ng, nP = naturality_residuals(a.pc, a.frame)
        return normalized(max_abs(ng if which == "g" else nP), a.frame.dg, a.frame.dP)

    return f


def _l1_implies_l2(a):
    return a.classes["L2"].residual if a.classes["L1"].flag else 0.0


def _norm_swapped(a):
    n = _s(a)["norm_nabla_P"]
    sw = swapped_norm(a.st, a.frame)
    return _scalar_rel(n + 2.0 * sw, n, sw)


def _norm_curvature(a):
    s = _s(a)
    return _scalar_rel(s["norm_nabla_P"] - 2.0 * (s["tau"] - s["tau_star2"]), s["norm_nabla_P"], s["tau"], s["tau_star2"])


def _p_tensor_forces_parallel(a):
    n = _s(a)["norm_nabla_P"]
    return _scalar_rel(n)


def _ricci_relation(a):
    P = a.frame.P
    rho, rho_star = a.cd.ricci, a.cd.ricci_star
    rho_star_P = np.einsum("ys,sz->yz", rho_star, P)
    res = rho + rho_star_P - 2.0 * a.pcd.ricci_prime + 0.5 * a.pcd.ricci_K
    return normalized(max_abs(res), rho, rho_star_P, a.pcd.ricci_prime, a.pcd.ricci_K)


def _rel(fn, *keys):
    def f(a):
        s = _s(a)
        return _scalar_rel(fn(s), *(s[k] for k in keys))

    return f


def _p_manifold_equivalences(a):
    s = _s(a)
    eps = SECOND_ORDER

    def small(x, *terms):
        return _scalar_rel(x, *terms) <= eps

    assertions = (
        small(s["norm_nabla_P"]),
        small(s["tau_prime"] - s["tau"], s["tau_prime"], s["tau"]),
        small(s["tau_prime"] - s["tau_star2"], s["tau_prime"], s["tau_star2"]),
        small(s["tau_K"]),
    )
    return 0.0 if len(set(assertions)) == 1 else 1.0


def _dim4(fn):
    def f(a):
        if a.dim != 4:
            return None
        return fn(a)

    return f


def _decomposition(a):
    s = _s(a)
    return decomposition_4d(a.pcd.H, a.frame.g, a.frame.P, s["tau_H"], s["tau_H_star"])


def _h_from_p_curvature(a):
    s = _s(a)
    pi1, pi2, pi3 = pi_basis(a.frame.g, a.frame.P)
    model = (4 * s["tau_prime"] - s["tau_K"]) / 16.0 * (pi1 + pi2) + (
        4 * s["tau_prime_star"] - s["tau_K_star"]
    ) / 16.0 * pi3
    return normalized(max_abs(a.pcd.H - model), a.pcd.H, model)


def _l1_tensor(a):
    res = a.cd.R - a.pcd.R_direct + 0.25 * a.pcd.K
    return normalized(max_abs(res), a.cd.R, a.pcd.R_direct, a.pcd.K)


_W3_L2_GATES = ("W3_local", "L2", "Rprime_P_tensor")

CATALOGUE: tuple[Check, ...] = (
    Check("axioms.metric_symmetry", "g_ij = g_ji", lambda t: t, lambda a: a.validation.metric_symmetry),
    Check("axioms.involution", "P^2 = id", lambda t: t, lambda a: a.validation.involution),
    Check("axioms.compatibility", "g(Px,Py) = g(x,y)", lambda t: t, lambda a: a.validation.compatibility),
    Check("axioms.trace", "tr P = 0", lambda t: t, lambda a: a.validation.trace),
    Check(
        "axioms.positive_definite",
        "smallest eigenvalue of g exceeds the tolerance",
        EXACT,
        lambda a: max(0.0, a.tolerance - a.validation.min_eigenvalue),
    ),
    Check("lc.symmetry", "Gamma^k_ij = Gamma^k_ji", EXACT, _lc_symmetry),
    Check("lc.metric_compat", "nabla g = 0", ALGEBRAIC, _lc_metric),
    Check("curv.antisymmetry", "R(x,y,z,w) = -R(y,x,z,w) = -R(x,y,w,z)", FIRST_ORDER,
          lambda a: curvature_like_residuals(a.cd.R)[0]),
    Check("curv.bianchi", "first Bianchi identity for R", FIRST_ORDER,
          lambda a: curvature_like_residuals(a.cd.R)[1]),
    Check("curv.ricci_identity", "(nabla_x F)(y,z,w) - (nabla_y F)(x,z,w) = R(x,y,Pz,w) - R(x,y,z,Pw)",
          SECOND_ORDER, _ricci_identity),
    Check("F.symmetry_yz", "F(x,y,z) = F(x,z,y)", ALGEBRAIC, _f_sym("yz")),
    Check("F.anti_P", "F(x,y,z) = -F(x,Py,Pz)", ALGEBRAIC, _f_sym("anti_P")),
    Check("F.mixed", "F(x,y,Pz) = -F(x,Py,z)", ALGEBRAIC, _f_sym("mixed")),
    Check("F.nijenhuis", "N from nabla P equals the four-term F expression", ALGEBRAIC, _nijenhuis),
    Check("F.norm_consistency", "||nabla P|| >= 0 and equals the F-based contraction", ALGEBRAIC,
          _norm_consistency),
    Check("thm.curvature_form", "R' = 1/4 {2R + 2R(x,y,Pz,Pw) + K}", SECOND_ORDER, _curvature_form),
    Check("thm.rprime_antisymmetry", "R' antisymmetric in (x,y) and (z,w)", FIRST_ORDER,
          _p_tensor_part("R'", "antisymmetry")),
    Check("thm.rprime_p_compat", "R'(x,y,Pz,Pw) = R'(x,y,z,w)", FIRST_ORDER, _p_tensor_part("R'", "p_compat")),
    Check("thm.k_antisymmetry", "K antisymmetric in (x,y) and (z,w)", FIRST_ORDER,
          _p_tensor_part("K", "antisymmetry")),
    Check("thm.k_p_compat", "K(x,y,Pz,Pw) = K(x,y,z,w)", FIRST_ORDER, _p_tensor_part("K", "p_compat")),
    Check("thm.p_tensor_criterion", "S R' = 1/4 (2 S R(x,y,Pz,Pw) + S K)", SECOND_ORDER, _p_tensor_criterion),
    Check("thm.l2_k_criterion", "in L2: S R' = 1/4 S K, so R' is a P-tensor iff K is", SECOND_ORDER,
          _l2_k_criterion, ("L2",)),
    Check("thm.h_p_tensor", "H = R + R(x,y,Pz,Pw) is a Riemannian P-tensor", SECOND_ORDER, _h_p_tensor,
          ("L2", "Rprime_P_tensor")),
    Check("pconn.q_antisymmetry", "Q(y,z,w) = -Q(y,w,z)", FIRST_ORDER, _q_antisymmetry),
    Check("pconn.q_dual_formula", "Q from -1/2 (nabla P)P equals -1/2 F(y,Pz,w)", ALGEBRAIC, _q_dual),
    Check("pconn.torsion_antisymmetry", "T(x,y,z) = -T(y,x,z)", EXACT, _torsion_anti),
    Check("pconn.torsion_formula", "T = -1/2 {F(x,Py,z) - F(y,Px,z)}", ALGEBRAIC, _torsion_formula),
    Check("pconn.torsion_cyclic", "S T(x,y,Pz) = 0", FIRST_ORDER, _torsion_cyclic),
    Check("pconn.natural_g", "nabla' g = 0", FIRST_ORDER, _natural("g")),
    Check("pconn.natural_P", "nabla' P = 0", FIRST_ORDER, _natural("P")),
    Check("class.l1_implies_l2", "an L1 point is an L2 point", lambda t: 4.0 * t, _l1_implies_l2),
    Check("w3.norm_swapped", "||nabla P|| = -2 g^ij g^ks g((nabla_i P)e_k, (nabla_s P)e_j)", SECOND_ORDER,
          _norm_swapped, ("W3",)),
    Check("w3.norm_curvature", "||nabla P|| = 2 (tau - tau**)", SECOND_ORDER, _norm_curvature, ("W3_local",)),
    Check("w3.p_tensor_forces_parallel", "W3 with R a P-tensor forces ||nabla P|| = 0", SECOND_ORDER,
          _p_tensor_forces_parallel, ("W3_local", "L1")),
    Check("scalar.ricci_relation", "rho(y,z) + rho*(y,Pz) = 2 rho'(y,z) - 1/2 rho(K)(y,z)", SECOND_ORDER, _ricci_relation,
          _W3_L2_GATES),
    Check("scalar.tau_plus_tau_star2", "tau + tau** = 2 tau' - 1/2 tau(K)", SECOND_ORDER,
          _rel(lambda s: s["tau"] + s["tau_star2"] - 2 * s["tau_prime"] + 0.5 * s["tau_K"],
               "tau", "tau_star2", "tau_prime", "tau_K"), _W3_L2_GATES),
    Check("scalar.tau_via_tau_K", "tau = tau' - 1/4 (tau(K) - ||nabla P||)", SECOND_ORDER,
          _rel(lambda s: s["tau"] - s["tau_prime"] + 0.25 * (s["tau_K"] - s["norm_nabla_P"]),
               "tau", "tau_prime", "tau_K", "norm_nabla_P"), _W3_L2_GATES),
    Check("scalar.eq3_4", "tau(K) = 1/2 ||nabla P||", SECOND_ORDER,
          _rel(lambda s: s["tau_K"] - 0.5 * s["norm_nabla_P"], "tau_K", "norm_nabla_P"), ("W3",)),
    Check("scalar.tau_via_norm", "tau = tau' + 1/8 ||nabla P||", SECOND_ORDER,
          _rel(lambda s: s["tau"] - s["tau_prime"] - s["norm_nabla_P"] / 8.0,
               "tau", "tau_prime", "norm_nabla_P"), _W3_L2_GATES),
    Check("scalar.norm_chain_tau", "||nabla P|| = -8 (tau' - tau)", SECOND_ORDER,
          _rel(lambda s: s["norm_nabla_P"] + 8.0 * (s["tau_prime"] - s["tau"]),
               "norm_nabla_P", "tau_prime", "tau"), _W3_L2_GATES),
    Check("scalar.norm_chain_tau_star2", "||nabla P|| = 8/3 (tau' - tau**)", SECOND_ORDER,
          _rel(lambda s: s["norm_nabla_P"] - 8.0 / 3.0 * (s["tau_prime"] - s["tau_star2"]),
               "norm_nabla_P", "tau_prime", "tau_star2"), _W3_L2_GATES),
    Check("scalar.norm_chain_tau_K", "||nabla P|| = 2 tau(K)", SECOND_ORDER,
          _rel(lambda s: s["norm_nabla_P"] - 2.0 * s["tau_K"], "norm_nabla_P", "tau_K"), _W3_L2_GATES),
    Check("scalar.p_manifold_equivalences", "P-manifold <=> tau' = tau <=> tau' = tau** <=> tau(K) = 0", EXACT,
          _p_manifold_equivalences, _W3_L2_GATES),
    Check("dim4.tau_H", "tau(H) = (4 tau' - tau(K)) / 2", SECOND_ORDER,
          _dim4(_rel(lambda s: s["tau_H"] - (4 * s["tau_prime"] - s["tau_K"]) / 2.0,
                     "tau_H", "tau_prime", "tau_K")), ("dim4", "H_P_tensor")),
    Check("dim4.tau_star_H", "tau*(H) = (4 tau'* - tau*(K)) / 2", SECOND_ORDER,
          _dim4(_rel(lambda s: s["tau_H_star"] - (4 * s["tau_prime_star"] - s["tau_K_star"]) / 2.0,
                     "tau_H_star", "tau_prime_star", "tau_K_star")), ("dim4", "H_P_tensor")),
    Check("dim4.decomposition", "H = nu(H)(pi1 + pi2) + nu*(H) pi3, nu = tau(H)/8, nu* = tau*(H)/8",
          SECOND_ORDER, _dim4(_decomposition), ("dim4", "H_P_tensor")),
    Check("dim4.h_from_p_curvature", "H = (4tau' - tau(K))/16 (pi1 + pi2) + (4tau'* - tau*(K))/16 pi3",
          SECOND_ORDER, _dim4(_h_from_p_curvature), ("dim4", "H_P_tensor")),
    Check("L1.tensor", "R = R' - 1/4 K", SECOND_ORDER, _l1_tensor, ("W3", "L1")),
    Check("L1.tau", "tau = tau' - 1/4 tau(K)", SECOND_ORDER,
          _rel(lambda s: s["tau"] - s["tau_prime"] + 0.25 * s["tau_K"], "tau", "tau_prime", "tau_K"),
          ("W3", "L1")),
    Check("L1.tau_star", "tau* = tau'* - 1/4 tau*(K)", SECOND_ORDER,
          _rel(lambda s: s["tau_star"] - s["tau_prime_star"] + 0.25 * s["tau_K_star"],
               "tau_star", "tau_prime_star", "tau_K_star"), ("W3", "L1")),
    Check("L1.dim4_tau", "tau = 1/2 tau(H)", SECOND_ORDER,
          _dim4(_rel(lambda s: s["tau"] - 0.5 * s["tau_H"], "tau", "tau_H")), ("W3", "L1", "dim4")),
    Check("L1.dim4_tau_star", "tau* = 1/2 tau*(H)", SECOND_ORDER,
          _dim4(_rel(lambda s: s["tau_star"] - 0.5 * s["tau_H_star"], "tau_star", "tau_H_star")),
          ("W3", "L1", "dim4")),
)

CHECK_IDS = tuple(c.id for c in CATALOGUE)
assert len(set(CHECK_IDS)) == len(CHECK_IDS)


def evaluate_check(check: Check, a: PointAnalysis) -> CheckResult:
    unmet = tuple(g for g in check.gates if not GATES[g](a))
    residual = check.compute(a)
    tol = check.tolerance_for(a)
    if residual is not None:
        residual = float(residual)
    if residual is not None and not math.isfinite(residual):
        status, residual = FAIL, None
    elif unmet:
        status = NOT_MET
    elif residual is None:
        status = FAIL
    else:
        status = PASS if residual <= tol else FAIL
    return CheckResult(check.id, residual, tol, status, check.gates, unmet)


def run_checks(a: PointAnalysis) -> list[CheckResult]:
    return [evaluate_check(c, a) for c in CATALOGUE]
