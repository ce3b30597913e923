"""Packed storage and invariants for the symmetric second-rank and the
third-rank (symmetric in its first two indices) tensors of the model.

Storage keeps true tensor components, never engineering shears:

* ``SymTensor2``   -> ndarray ``(6,)`` ordered ``11, 22, 33, 12, 13, 23``
* ``MomentTensor3`` -> ndarray ``(6, 3)``; row ``a`` is the symmetric pair
  ``(i, j)`` above and column ``k`` the third index.

Every contraction over a packed pair index carries the pair multiplicity
(1 on the diagonal, 2 off it).
"""
from __future__ import annotations

import numpy as np

PAIRS = ((0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2))
PAIR_NAMES = ("11", "22", "33", "12", "13", "23")
MULT = np.array([1.0, 1.0, 1.0, 2.0, 2.0, 2.0])
IDENTITY = np.array([1.0, 1.0, 1.0, 0.0, 0.0, 0.0])

# full (i, j) -> packed row
PAIR_INDEX = np.empty((3, 3), dtype=int)
for _a, (_i, _j) in enumerate(PAIRS):
    PAIR_INDEX[_i, _j] = PAIR_INDEX[_j, _i] = _a


def sym(c11=0.0, c22=0.0, c33=0.0, c12=0.0, c13=0.0, c23=0.0) -> np.ndarray:
    return np.array([c11, c22, c33, c12, c13, c23], dtype=float)


def zero_moment() -> np.ndarray:
    return np.zeros((6, 3))


def to_full2(t: np.ndarray) -> np.ndarray:
    """Packed ``(6,)`` -> full ``(3, 3)``."""
    return np.asarray(t, dtype=float)[PAIR_INDEX]


def from_full2(a: np.ndarray) -> np.ndarray:
    """Full ``(3, 3)`` -> packed, symmetrizing the off-diagonal pairs."""
    a = 0.5 * (a + a.T)
    return np.array([a[i, j] for i, j in PAIRS])


def to_full3(m: np.ndarray) -> np.ndarray:
    """Packed ``(6, 3)`` -> full ``(3, 3, 3)``."""
    return np.asarray(m, dtype=float)[PAIR_INDEX]


def from_full3(a: np.ndarray) -> np.ndarray:
    a = 0.5 * (a + a.transpose(1, 0, 2))
    return np.array([a[i, j] for i, j in PAIRS])


def ddot(a: np.ndarray, b: np.ndarray) -> float:
    """``a_ij b_ij`` for packed symmetric tensors."""
    return float(np.dot(MULT * a, b))


def tdot(a: np.ndarray, b: np.ndarray) -> float:
    """``a_ijk b_ijk`` for packed third-rank tensors."""
    return float(np.sum(MULT[:, None] * a * b))


def norm2(t: np.ndarray) -> float:
    return ddot(t, t) ** 0.5


def norm3(m: np.ndarray) -> float:
    return tdot(m, m) ** 0.5


def deviator_mean(t: np.ndarray) -> tuple[np.ndarray, float]:
    """Split ``t`` into its deviator and mean part: ``t = dev + mean * I``."""
    t = np.asarray(t, dtype=float)
    mean = (t[0] + t[1] + t[2]) / 3.0
    dev = t - mean * IDENTITY
    return dev, mean


def vonmises_eq(t: np.ndarray) -> float:
    """Von Mises equivalent ``sqrt(3/2 dev:dev)``."""
    dev, _ = deviator_mean(t)
    return (1.5 * ddot(dev, dev)) ** 0.5


def moment_mean_dev(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Mean vector and deviator of ``m`` over its first two indices.

    ``mean_k = m_hhk / 3`` and ``dev_ijk = m_ijk - delta_ij mean_k``.
    """
    m = np.asarray(m, dtype=float)
    mean = (m[0] + m[1] + m[2]) / 3.0
    dev = m.copy()
    dev[:3] -= mean
    return mean, dev


def moment_invariants(m: np.ndarray) -> tuple[float, float]:
    """Quadratic invariants ``M_I = M_mi M_mi`` and ``M_II = 3/2 M'_ijk M'_ijk``."""
    mean, dev = moment_mean_dev(m)
    return float(mean @ mean), 1.5 * tdot(dev, dev)


def moment_trace(m: np.ndarray) -> np.ndarray:
    """Vector ``M_ijj`` (trace over the last two indices), one entry per ``i``."""
    return np.einsum("ijj->i", to_full3(m))


def q_squared(m: np.ndarray, a_one: float = 0.194, a_two: float = 6.108) -> float:
    m_i, m_ii = moment_invariants(m)
    return a_one * m_i + a_two * m_ii
