"""Serendipity 8-node quadrilateral shape functions and 2x2 Gauss rule."""
from __future__ import annotations

import numpy as np

_G = 1.0 / np.sqrt(3.0)
# (xi, eta, weight)
GAUSS_2X2 = ((-_G, -_G, 1.0), (_G, -_G, 1.0), (_G, _G, 1.0), (-_G, _G, 1.0))

_XI = np.array([-1.0, 1.0, 1.0, -1.0, 0.0, 1.0, 0.0, -1.0])
_ETA = np.array([-1.0, -1.0, 1.0, 1.0, -1.0, 0.0, 1.0, 0.0])


def shape_functions(xi: float, eta: float) -> np.ndarray:
    n = np.empty(8)
    for a in range(4):
        n[a] = 0.25 * (1 + xi * _XI[a]) * (1 + eta * _ETA[a]) * (xi * _XI[a] + eta * _ETA[a] - 1)
    n[4] = 0.5 * (1 - xi * xi) * (1 - eta)
    n[5] = 0.5 * (1 + xi) * (1 - eta * eta)
    n[6] = 0.5 * (1 - xi * xi) * (1 + eta)
    n[7] = 0.5 * (1 - xi) * (1 - eta * eta)
    return n


def shape_derivatives(xi: float, eta: float) -> tuple[np.ndarray, np.ndarray]:
    """``(N (8,), dN/d(xi, eta) (2, 8))``."""
    dn = np.empty((2, 8))
    for a in range(4):
        xa, ya = _XI[a], _ETA[a]
        dn[0, a] = 0.25 * xa * (1 + eta * ya) * (2 * xi * xa + eta * ya)
        dn[1, a] = 0.25 * ya * (1 + xi * xa) * (xi * xa + 2 * eta * ya)
    dn[0, 4], dn[1, 4] = -xi * (1 - eta), -0.5 * (1 - xi * xi)
    dn[0, 5], dn[1, 5] = 0.5 * (1 - eta * eta), -eta * (1 + xi)
    dn[0, 6], dn[1, 6] = -xi * (1 + eta), 0.5 * (1 - xi * xi)
    dn[0, 7], dn[1, 7] = -0.5 * (1 - eta * eta), -eta * (1 - xi)
    return shape_functions(xi, eta), dn
