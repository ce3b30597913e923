"""Plane-strain 8-node element with the extra nodal strain tensor W.

Nodal unknowns, in this order: ``u1, u2, W11, W22, W12, W33``.  At a Gauss
point the material sees the strain increment of ``u`` and the in-plane
gradient of ``W``; the two are tied by a penalty on ``W - eps(u)``.
"""
from __future__ import annotations

import numpy as np

from ..tensors import MULT
from .shape import GAUSS_2X2, shape_derivatives

DOF_NAMES = ("u1", "u2", "W11", "W22", "W12", "W33")
NDOF = len(DOF_NAMES)
# packed pair row of each W unknown
_W_ROWS = {2: 0, 3: 1, 4: 3, 5: 2}
# multiplicities of the 24 packed (strain, gradient) components
WEIGHTS = np.concatenate([MULT, np.repeat(MULT, 3)])


def gauss_operators(xy: np.ndarray):
    """Operators at the four Gauss points of one element.

    Returns ``(B, P, dA, X)``: ``B (4, 24, 48)`` maps element unknowns to the
    packed strain and strain-gradient, ``P (4, 6, 48)`` to ``W - eps(u)``,
    ``dA (4,)`` are the integration weights and ``X (4, 2)`` the Gauss point
    coordinates.
    """
    ne = 8 * NDOF
    b_all = np.zeros((4, 24, ne))
    p_all = np.zeros((4, 6, ne))
    da = np.zeros(4)
    pts = np.zeros((4, 2))
    for g, (xi, eta, w) in enumerate(GAUSS_2X2):
        n, dn_ref = shape_derivatives(xi, eta)
        jac = dn_ref @ xy
        det = np.linalg.det(jac)
        if det <= 0:
            raise ValueError("non-positive Jacobian")
        dn = np.linalg.solve(jac, dn_ref)  # (2, 8) d/dx, d/dy
        eps = np.zeros((6, ne))
        wfield = np.zeros((6, ne))
        grad = np.zeros((18, ne))
        for a in range(8):
            c = NDOF * a
            eps[0, c] = dn[0, a]
            eps[1, c + 1] = dn[1, a]
            eps[3, c] = 0.5 * dn[1, a]
            eps[3, c + 1] = 0.5 * dn[0, a]
            for d, row in _W_ROWS.items():
                wfield[row, c + d] = n[a]
                grad[3 * row, c + d] = dn[0, a]
                grad[3 * row + 1, c + d] = dn[1, a]
        b_all[g, :6] = eps
        b_all[g, 6:] = grad
        p_all[g] = wfield - eps
        da[g] = det * w
        pts[g] = n @ xy
    return b_all, p_all, da, pts


def element_forces_stiffness(b, p, da, stress, tangent, penalty: float, d_elem: np.ndarray):
    """Internal forces and stiffness of one element.

    ``stress (4, 24)`` holds packed ``(sigma, moment)`` per Gauss point,
    ``tangent (4, 24, 24)`` the matching derivative blocks and ``d_elem`` the
    current element unknowns (for the penalty term).
    """
    ws = stress * WEIGHTS
    gap = np.einsum("gij,j->gi", p, d_elem)
    force = np.einsum("g,gji,gj->i", da, b, ws) + penalty * np.einsum("g,gji,gj->i", da, p, MULT * gap)
    k = np.einsum("g,gji,gjk,gkl->il", da, b, WEIGHTS[None, :, None] * tangent, b)
    k += penalty * np.einsum("g,gji,j,gjl->il", da, p, MULT, p)
    return force, k
