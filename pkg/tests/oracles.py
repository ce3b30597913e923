"""Reference implementations used only by the tests.

They share no code with the package beyond the yield function where the
oracle is defined in terms of it; everything else works on full-index
3x3 and 3x3x3 arrays with plain loops.
"""
from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.optimize import minimize, root

D = np.eye(3)
PAIRS = ((0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2))


def full2(t):
    a = np.zeros((3, 3))
    for n, (i, j) in enumerate(PAIRS):
        a[i, j] = a[j, i] = t[n]
    return a


def pack2(a):
    return np.array([a[i, j] for i, j in PAIRS])


def full3(m):
    a = np.zeros((3, 3, 3))
    for n, (i, j) in enumerate(PAIRS):
        a[i, j, :] = a[j, i, :] = m[n]
    return a


def pack3(a):
    return np.array([a[i, j, :] for i, j in PAIRS])


def invariants_loop(m):
    """``(M_I, M_II)`` by explicit loops over all indices."""
    a = full3(m)
    mean = [sum(a[h, h, k] for h in range(3)) / 3 for k in range(3)]
    m_i = sum(x * x for x in mean)
    m_ii = 0.0
    for i, j, k in itertools.product(range(3), repeat=3):
        dev = a[i, j, k] - D[i, j] * mean[k]
        m_ii += dev * dev
    return m_i, 1.5 * m_ii


def moment_law_loop(g, lam, mu, b):
    """Elastic moment for a full-index gradient ``g_ijk`` (loops)."""
    g_hhk = [sum(g[h, h, k] for h in range(3)) for k in range(3)]
    g_ihh = [sum(g[i, h, h] for h in range(3)) for i in range(3)]
    u = [(lam * g_hhk[i] + 2 * mu * g_ihh[i]) / (2 * lam + 8 * mu) for i in range(3)]
    out = np.zeros((3, 3, 3))
    for i, j, k in itertools.product(range(3), repeat=3):
        out[i, j, k] = (b * b / 5) * (
            lam * D[i, j] * g_hhk[k]
            + 2 * mu * g[i, j, k]
            - 2 * lam * D[i, j] * u[k]
            - 2 * mu * (D[i, k] * u[j] + D[j, k] * u[i])
        )
    return out


# -- classical Gurson return mapping ---------------------------------------

def gurson_return(sigma_star, f, q, hardening, e0, lam, mu):
    """Backward-Euler Gurson update with associated flow.

    Unknowns: equivalent stress, mean stress, multiplier and hardening
    increment; the deviator stays radial.  ``hardening(e) -> (sbar, h)``.
    Returns ``(sigma_eq, sigma_m, dE, df)``.
    """
    bulk = lam + 2 * mu / 3
    p = q * f
    a = full2(sigma_star)
    sm_star = np.trace(a) / 3
    dev = a - sm_star * D
    q_star = math.sqrt(1.5 * np.sum(dev * dev))
    sbar0 = hardening(e0)[0]

    def unpack(x):
        return x[0] * sbar0, x[1] * sbar0, x[2] * sbar0 / mu, x[3]

    def eqs(x):
        qq, sm, dl, de = unpack(x)
        sbar = hardening(e0 + de)[0]
        dphi_dq = 2 * qq / sbar**2
        dphi_dm = 3 * p / sbar * math.sinh(1.5 * sm / sbar)
        return [
            (qq - q_star + 3 * mu * dl * dphi_dq) / sbar0,
            (sm - sm_star + bulk * dl * dphi_dm) / sbar0,
            (qq / sbar) ** 2 + 2 * p * math.cosh(1.5 * sm / sbar) - 1 - p * p,
            (1 - f) * sbar * de - dl * (qq * dphi_dq + sm * dphi_dm),
        ]

    x0 = [min(q_star / sbar0, 1.0) * 0.9, 0.5 * sm_star / sbar0, 1e-3, 1e-3]
    sol = root(eqs, x0, method="hybr", tol=1e-15)
    if not sol.success:
        sol = root(eqs, x0, method="lm", tol=1e-15)
    qq, sm, dl, de = unpack(sol.x)
    sbar = hardening(e0 + de)[0]
    tr_p = dl * 3 * p / sbar * math.sinh(1.5 * sm / sbar)
    return qq, sm, de, (1 - f) * tr_p, float(np.max(np.abs(eqs(sol.x))))


# -- convex minimization at fixed yield stress -----------------------------

def complementary_energy(ds, dm, lam, mu, b):
    a = full2(ds)
    mean = np.trace(a) / 3
    dev = a - mean * D
    bulk3 = 3 * lam + 2 * mu
    e = np.sum(dev * dev) / (2 * mu) + 3 * mean**2 / bulk3
    g = full3(dm)
    mm = np.array([np.trace(g[:, :, k]) / 3 for k in range(3)])
    gdev = g - np.einsum("ij,k->ijk", D, mm)
    e += (np.sum(gdev * gdev) / (2 * mu) + 3 * mm @ mm / bulk3) * 5 / b**2
    return 0.5 * e


def convex_projection(sigma_star, moment_star, sigma_bar, p, params, yield_function):
    """Closest admissible ``(sigma, moment)`` in the complementary energy."""
    lam, mu, b = params.lam, params.mu, params.b
    ss, sm_ = sigma_bar, sigma_bar * b

    def unpack(x):
        return x[:6] * ss, x[6:].reshape(6, 3) * sm_

    def obj(x):
        s, m = unpack(x)
        return complementary_energy(s - sigma_star, m - moment_star, lam, mu, b) * mu / sigma_bar**2

    def trace(x):
        a = full3(x[6:].reshape(6, 3))
        return np.array([sum(a[i, j, j] for j in range(3)) for i in range(3)])

    x0 = 0.5 * np.concatenate([sigma_star / ss, (moment_star / sm_).ravel()])
    cons = [
        {"type": "ineq", "fun": lambda x: -yield_function(*unpack(x), sigma_bar, p, params)},
        {"type": "eq", "fun": trace},
    ]
    res = minimize(obj, x0, method="SLSQP", constraints=cons, options={"ftol": 1e-16, "maxiter": 1000})
    return unpack(res.x)


# -- J2 radial return and its consistent tangent -----------------------------

def j2_radial_return(sigma_star, sigma_y):
    a = full2(sigma_star)
    mean = np.trace(a) / 3
    dev = a - mean * D
    q = math.sqrt(1.5 * np.sum(dev * dev))
    return pack2(dev * (sigma_y / q) + mean * D)


def j2_tangent_packed(sigma_star, sigma_y, lam, mu):
    """Perfect-plasticity algorithmic tangent, columns per packed strain."""
    a = full2(sigma_star)
    dev = a - np.trace(a) / 3 * D
    q = math.sqrt(1.5 * np.sum(dev * dev))
    n = dev / math.sqrt(np.sum(dev * dev))
    theta = sigma_y / q
    bulk = lam + 2 * mu / 3
    c = np.zeros((3, 3, 3, 3))
    for i, j, k, l in itertools.product(range(3), repeat=4):
        i_sym = 0.5 * (D[i, k] * D[j, l] + D[i, l] * D[j, k])
        i_dev = i_sym - D[i, j] * D[k, l] / 3
        c[i, j, k, l] = bulk * D[i, j] * D[k, l] + 2 * mu * theta * (i_dev - n[i, j] * n[k, l])
    out = np.zeros((6, 6))
    for r, (i, j) in enumerate(PAIRS):
        for s, (k, l) in enumerate(PAIRS):
            out[r, s] = c[i, j, k, l] if k == l else c[i, j, k, l] + c[i, j, l, k]
    return out


# -- Q8 element stiffness by brute force -------------------------------------

_NODES = [(-1, -1), (1, -1), (1, 1), (-1, 1), (0, -1), (1, 0), (0, 1), (-1, 0)]


def _q8(xi, eta):
    n = np.zeros(8)
    dn = np.zeros((8, 2))
    for a, (xa, ya) in enumerate(_NODES):
        if xa != 0 and ya != 0:
            n[a] = 0.25 * (1 + xi * xa) * (1 + eta * ya) * (xi * xa + eta * ya - 1)
            dn[a, 0] = 0.25 * xa * (1 + eta * ya) * (2 * xi * xa + eta * ya)
            dn[a, 1] = 0.25 * ya * (1 + xi * xa) * (xi * xa + 2 * eta * ya)
        elif xa == 0:
            n[a] = 0.5 * (1 - xi * xi) * (1 + eta * ya)
            dn[a, 0] = -xi * (1 + eta * ya)
            dn[a, 1] = 0.5 * ya * (1 - xi * xi)
        else:
            n[a] = 0.5 * (1 + xi * xa) * (1 - eta * eta)
            dn[a, 0] = 0.5 * xa * (1 - eta * eta)
            dn[a, 1] = -eta * (1 + xi * xa)
    return n, dn


def element_stiffness_dense(xy, lam, mu, b, kappa):
    """Elastic stiffness of one element from the quadratic energy.

    Every unknown is switched on in turn; its full-index strain, ``W`` and
    gradient of ``W`` are built explicitly and the bilinear form is summed
    over the four Gauss points.  Unknown order per node: u1 u2 W11 W22 W12 W33.
    """
    g = 1 / math.sqrt(3)
    pts = [(-g, -g), (g, -g), (g, g), (-g, g)]
    w_slot = {2: (0, 0), 3: (1, 1), 4: (0, 1), 5: (2, 2)}
    k = np.zeros((48, 48))
    for xi, eta in pts:
        n, dn_ref = _q8(xi, eta)
        jac = dn_ref.T @ xy
        det = np.linalg.det(jac)
        dn = dn_ref @ np.linalg.inv(jac).T  # (8, 2)
        fields = []
        for a in range(8):
            for d in range(6):
                eps = np.zeros((3, 3))
                w = np.zeros((3, 3))
                gw = np.zeros((3, 3, 3))
                if d < 2:
                    grad_u = np.zeros((3, 3))
                    grad_u[d, 0], grad_u[d, 1] = dn[a, 0], dn[a, 1]
                    eps = 0.5 * (grad_u + grad_u.T)
                else:
                    i, j = w_slot[d]
                    w[i, j] = w[j, i] = n[a]
                    for kk in range(2):
                        gw[i, j, kk] = gw[j, i, kk] = dn[a, kk]
                fields.append((eps, w, gw))
        for r, (e1, w1, g1) in enumerate(fields):
            for s, (e2, w2, g2) in enumerate(fields):
                sig2 = lam * np.trace(e2) * D + 2 * mu * e2
                mom2 = moment_law_loop(g2, lam, mu, b)
                gap1, gap2 = w1 - e1, w2 - e2
                k[r, s] += det * (np.sum(e1 * sig2) + np.sum(g1 * mom2) + kappa * np.sum(gap1 * gap2))
    return k
