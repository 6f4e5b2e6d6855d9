"""Brute-force index loops, kept deliberately free of numpy contractions.

These are the independent side of the contraction cross-checks: every scalar
the library obtains through ``tensor.contract`` / ``einsum`` is recomputed
here with explicit Python loops over plain nested lists.
"""

from __future__ import annotations

from itertools import product


def _lists(a):
    return a.tolist() if hasattr(a, "tolist") else a


def contract_loops(t, a: int, b: int, g_inv=None):
    """Contract slots ``a`` and ``b`` of a nested-list tensor, with or without g^{ij}.

    Returns a dict mapping the remaining index tuple to its component.
    """
    t = _lists(t)
    g_inv = _lists(g_inv)
    shape = []
    x = t
    while isinstance(x, list):
        shape.append(len(x))
        x = x[0]
    rank, n = len(shape), shape[0]
    rest = [s for s in range(rank) if s not in (a, b)]
    out = {}
    for free in product(range(n), repeat=len(rest)):
        total = 0.0
        for i in range(n):
            for j in range(n):
                if g_inv is None and i != j:
                    continue
                idx = [0] * rank
                for s, v in zip(rest, free):
                    idx[s] = v
                idx[a], idx[b] = i, j
                c = t
                for v in idx:
                    c = c[v]
                total += c if g_inv is None else g_inv[i][j] * c
        out[free] = total
    return out


def traces_loops(L, g_inv, P):
    """(tau, tau*, tau**) of a rank-4 covariant L by quadruple/sextuple loops.

    tau   = g^ij g^ks L(e_i, e_k, e_s, e_j)
    tau*  = g^ij g^ks L(e_i, e_k, e_s, P e_j)
    tau** = g^ij g^ks L(e_i, e_k, P e_s, P e_j)
    """
    L, g_inv, P = _lists(L), _lists(g_inv), _lists(P)
    n = len(g_inv)
    tau = tau_star = tau_star2 = 0.0
    for i, j, k, s in product(range(n), repeat=4):
        w = g_inv[i][j] * g_inv[k][s]
        if w == 0.0:
            continue
        tau += w * L[i][k][s][j]
        for m in range(n):
            tau_star += w * L[i][k][s][m] * P[m][j]
            for q in range(n):
                tau_star2 += w * L[i][k][q][m] * P[q][s] * P[m][j]
    return tau, tau_star, tau_star2


def norm_nabla_p_loops(nabla_P, g, g_inv):
    """g^ij g^ks g_ab (nabla_i P)^a_k (nabla_j P)^b_s."""
    nP, g, g_inv = _lists(nabla_P), _lists(g), _lists(g_inv)
    n = len(g)
    total = 0.0
    for i, j, k, s in product(range(n), repeat=4):
        w = g_inv[i][j] * g_inv[k][s]
        if w == 0.0:
            continue
        for a, b in product(range(n), repeat=2):
            total += w * g[a][b] * nP[i][a][k] * nP[j][b][s]
    return total


def twist_loops(L, P):
    """L(x, y, Pz, Pw) componentwise."""
    L, P = _lists(L), _lists(P)
    n = len(P)
    out = [[[[0.0] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for i, j, k, l in product(range(n), repeat=4):
        total = 0.0
        for a, b in product(range(n), repeat=2):
            total += L[i][j][a][b] * P[a][k] * P[b][l]
        out[i][j][k][l] = total
    return out


def l1_residual_loops(R, P):
    """max |R(x,y,Pz,Pw) - R(x,y,z,w)| / (1 + max |R|)."""
    R = _lists(R)
    RPP = twist_loops(R, P)
    n = len(R)
    diff = scale = 0.0
    for i, j, k, l in product(range(n), repeat=4):
        diff = max(diff, abs(RPP[i][j][k][l] - R[i][j][k][l]))
        scale = max(scale, abs(R[i][j][k][l]))
    return diff / (1.0 + scale)


def k_tensor_loops(nabla_P, g):
    """K_ijkl = -g_ms (nabla_i P)^m_k (nabla_j P)^s_l + g_ms (nabla_j P)^m_k (nabla_i P)^s_l."""
    nP, g = _lists(nabla_P), _lists(g)
    n = len(g)
    out = [[[[0.0] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for i, j, k, l in product(range(n), repeat=4):
        total = 0.0
        for m, s in product(range(n), repeat=2):
            total += g[m][s] * (nP[j][m][k] * nP[i][s][l] - nP[i][m][k] * nP[j][s][l])
        out[i][j][k][l] = total
    return out
