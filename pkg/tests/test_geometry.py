import math
from itertools import product

import numpy as np
import pytest

from papm.geometry import (
    christoffel,
    curvature_like_residuals,
    f_symmetry_residuals,
    max_abs,
    metric_compatibility,
    nijenhuis_via_F,
    ricci_identity_residual,
    structure_tensors,
    swapped_norm,
)
from papm.harness.fixtures import get
from papm.manifold import evaluate_frame
from papm.oracles import norm_nabla_p_loops, traces_loops
from papm.pconnection import pi_basis

from conftest import all_points, analysis

POINTS = all_points()


def test_flat_product_is_flat_and_parallel():
    a = analysis("flat_product", 1)
    assert not a.lc.gamma.any() and not a.cd.R.any()
    assert a.cd.tau == a.cd.tau_star == a.cd.tau_star2 == 0.0
    assert not a.st.F.any() and not a.st.N.any()
    assert a.st.norm_nabla_P == 0.0


def test_sphere_christoffel_symbols():
    a = analysis("sphere_patch", 0)  # theta = pi/4
    assert a.lc.gamma[0, 1, 1] == pytest.approx(-0.5, abs=1e-15)
    assert a.lc.gamma[1, 0, 1] == pytest.approx(1.0, abs=1e-15)
    assert a.lc.gamma[1, 1, 0] == a.lc.gamma[1, 0, 1]


def test_warped_christoffel_symbols():
    spec = get("warped").spec()
    for i, point in enumerate(spec.points):
        x1 = point[0]
        gamma = analysis("warped", i).lc.gamma
        assert gamma[0, 2, 2] == pytest.approx(-x1, abs=1e-15)
        assert gamma[2, 0, 2] == pytest.approx(x1 / (1 + x1 * x1), abs=1e-15)


def _christoffel_loops(frame):
    n = frame.dim
    out = np.zeros((n, n, n))
    for k, i, j, l in product(range(n), repeat=4):
        out[k, i, j] += 0.5 * frame.g_inv[k, l] * (frame.dg[i, j, l] + frame.dg[j, i, l] - frame.dg[l, i, j])
    return out


@pytest.mark.parametrize("name, index", POINTS)
def test_christoffel_matches_loops_and_is_metric(name, index):
    a = analysis(name, index)
    assert np.array_equal(a.lc.gamma, a.lc.gamma.transpose(0, 2, 1))
    assert max_abs(a.lc.gamma - _christoffel_loops(a.frame)) <= 1e-13
    nabla_g = metric_compatibility(a.lc.gamma, a.frame.g, a.frame.dg)
    assert max_abs(nabla_g) / (1 + max_abs(a.frame.dg)) <= 1e-10


def test_dgamma_matches_finite_differences_of_gamma():
    spec = get("heisenberg_w3").spec()
    point = np.array(spec.points[1])
    lc = analysis("heisenberg_w3", 1).lc
    h = 1e-5
    for m in range(4):
        e = np.zeros(4)
        e[m] = h
        plus = christoffel(evaluate_frame(spec, point + e)).gamma
        minus = christoffel(evaluate_frame(spec, point - e)).gamma
        assert max_abs(lc.dgamma[m] - (plus - minus) / (2 * h)) <= 1e-8


@pytest.mark.parametrize("index", range(4))
def test_sphere_curvature_sign(index):
    a = analysis("sphere_patch", index)
    theta = get("sphere_patch").spec().points[index][0]
    assert a.cd.R[0, 1, 1, 0] == pytest.approx(math.sin(theta) ** 2, abs=1e-12)
    assert a.cd.R[0, 1, 0, 1] == pytest.approx(-math.sin(theta) ** 2, abs=1e-12)
    assert abs(a.cd.tau - 2.0) <= 1e-9
    # unit sphere: R(x,y,z,w) = g(y,z)g(x,w) - g(x,z)g(y,w)
    pi1, _, _ = pi_basis(a.frame.g, a.frame.P)
    assert max_abs(a.cd.R - pi1) <= 1e-12


@pytest.mark.parametrize("name, index", POINTS)
def test_curvature_is_curvature_like(name, index):
    anti, bianchi = curvature_like_residuals(analysis(name, index).cd.R)
    assert anti <= 1e-10
    assert bianchi <= 1e-9


@pytest.mark.parametrize("name, index", POINTS)
def test_f_symmetries(name, index):
    a = analysis(name, index)
    for value in f_symmetry_residuals(a.st.F, a.frame.P).values():
        assert value <= 1e-10


@pytest.mark.parametrize("name, index", POINTS)
def test_norm_is_nonnegative_and_vanishes_exactly_with_F(name, index):
    a = analysis(name, index)
    n = a.st.norm_nabla_P
    assert n >= -1e-12
    assert (n <= 1e-9) == (max_abs(a.st.F) <= 1e-9)


def test_rotating_2d_structure_tensor_at_zero():
    a = analysis("rotating_2d", 0)
    F = a.st.F
    assert F[0, 0, 1] == pytest.approx(1.0, abs=1e-15)
    assert F[0, 1, 0] == pytest.approx(1.0, abs=1e-15)
    rest = F.copy()
    rest[0, 0, 1] = rest[0, 1, 0] = 0.0
    assert not rest.any()
    assert a.st.norm_nabla_P == pytest.approx(2.0, abs=1e-14)


def _nijenhuis_loops(nP, P, g):
    # [P,P](x,y) = (nabla_x P)Py - (nabla_{Px} P)y + (nabla_y P)Px - (nabla_{Py} P)x, lowered
    n = len(P)
    up = np.zeros((n, n, n))
    for i, j, k, s in product(range(n), repeat=4):
        up[i, j, k] += nP[i, k, s] * P[s, j] - P[s, i] * nP[s, k, j] + nP[j, k, s] * P[s, i] - P[s, j] * nP[s, k, i]
    return np.einsum("lk,ijk->ijl", g, up)


@pytest.mark.parametrize("name, index", POINTS)
def test_nijenhuis_three_ways(name, index):
    a = analysis(name, index)
    loops = _nijenhuis_loops(a.st.nabla_P, a.frame.P, a.frame.g)
    assert max_abs(a.st.N - loops) <= 1e-12 * (1 + max_abs(loops))
    assert max_abs(a.st.N - nijenhuis_via_F(a.st.F, a.frame.P)) <= 1e-12 * (1 + max_abs(loops))


def test_rotating_2d_is_not_integrable():
    a = analysis("rotating_2d", 0)
    assert max_abs(a.st.N) > 0.1


def test_nabla_F_matches_finite_differences_when_flat():
    # g = I so Gamma = 0 and grad F is the plain coordinate derivative of F
    spec = get("rotating_4d").spec()
    point = np.array(spec.points[1])
    nF = analysis("rotating_4d", 1).nabla_F
    h = 1e-5
    for m in range(4):
        e = np.zeros(4)
        e[m] = h
        Fp = structure_tensors(f := evaluate_frame(spec, point + e), christoffel(f)).F
        Fm = structure_tensors(f := evaluate_frame(spec, point - e), christoffel(f)).F
        assert max_abs(nF[m] - (Fp - Fm) / (2 * h)) <= 1e-6


@pytest.mark.parametrize("name, index", POINTS)
def test_ricci_identity(name, index):
    a = analysis(name, index)
    res = ricci_identity_residual(a.nabla_F, a.cd, a.frame.P)
    assert max_abs(res) / (1 + max(max_abs(a.nabla_F), max_abs(a.cd.R))) <= 1e-8


@pytest.mark.parametrize("name, index", POINTS)
def test_traces_match_loops(name, index):
    a = analysis(name, index)
    tau, tau_star, tau_star2 = traces_loops(a.cd.R, a.frame.g_inv, a.frame.P)
    for lib, loop in ((a.cd.tau, tau), (a.cd.tau_star, tau_star), (a.cd.tau_star2, tau_star2)):
        assert abs(lib - loop) <= 1e-12 * (1 + abs(loop))
    loop_norm = norm_nabla_p_loops(a.st.nabla_P, a.frame.g, a.frame.g_inv)
    assert abs(a.st.norm_nabla_P - loop_norm) <= 1e-12 * (1 + loop_norm)


def test_w3_identity_on_flat_product():
    a = analysis("flat_product", 0)
    assert swapped_norm(a.st, a.frame) == 0.0
    assert a.st.norm_nabla_P == 2 * (a.cd.tau - a.cd.tau_star2) == 0.0


@pytest.mark.parametrize("index", range(3))
def test_w3_identity_on_heisenberg(index):
    a = analysis("heisenberg_w3", index)
    n = a.st.norm_nabla_P
    assert n == pytest.approx(4.0, abs=1e-12)
    assert abs(n + 2 * swapped_norm(a.st, a.frame)) <= 1e-8
    assert abs(n - 2 * (a.cd.tau - a.cd.tau_star2)) <= 1e-8
    assert a.cd.tau == pytest.approx(-0.5, abs=1e-12)
    assert a.cd.tau_star2 == pytest.approx(-2.5, abs=1e-12)


def test_w3_identity_fails_off_hypothesis():
    # warped at x1 = 0 has F = 0 there but not nearby, so the differentiated identity does not hold
    a = analysis("warped", 0)
    assert a.classes["W3"].flag and not a.classes["W3_local"].flag
    assert abs(a.st.norm_nabla_P - 2 * (a.cd.tau - a.cd.tau_star2)) > 1.0


@pytest.mark.parametrize("name, index", POINTS)
def test_p_tensor_curvature_with_w3_forces_parallel(name, index):
    a = analysis(name, index)
    if a.classes["L1"].flag and a.classes["W3_local"].flag:
        assert a.st.norm_nabla_P <= 1e-8
