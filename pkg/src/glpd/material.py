"""GLPD material point: parameters, state, elastic predictor and yield surface."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .hardening import HardeningCurve
from .tensors import (
    IDENTITY,
    deviator_mean,
    moment_invariants,
    moment_trace,
    moment_mean_dev,
    norm3,
    vonmises_eq,
    zero_moment,
)

A_ONE = 0.194
A_TWO = 6.108


@dataclass(frozen=True)
class MaterialParams:
    """Elastic, damage and microstructural constants (mm, MPa)."""

    lam: float
    mu: float
    b: float
    q: float = 1.47
    f_c: float = 0.05
    delta: float = 3.0
    hardening: HardeningCurve = field(default_factory=lambda: HardeningCurve.perfect(450.0))
    a_one: float = A_ONE
    a_two: float = A_TWO

    def __post_init__(self):
        if self.mu <= 0 or 3 * self.lam + 2 * self.mu <= 0:
            raise ValueError("need mu > 0 and 3 lambda + 2 mu > 0")
        if self.b <= 0:
            raise ValueError("microstructural length b must be positive")
        if self.q < 1:
            raise ValueError("Tvergaard parameter q must be >= 1")
        if not 0 < self.f_c < 1:
            raise ValueError("critical porosity must lie in (0, 1)")
        if self.delta < 1:
            raise ValueError("coalescence accelerator delta must be >= 1")

    @classmethod
    def from_young(cls, young: float, nu: float, **kw) -> MaterialParams:
        if not (young > 0 and -1 < nu < 0.5):
            raise ValueError(f"need young > 0 and -1 < poisson < 0.5, got {young}, {nu}")
        lam = young * nu / ((1 + nu) * (1 - 2 * nu))
        mu = young / (2 * (1 + nu))
        return cls(lam=lam, mu=mu, **kw)

    @property
    def bulk3(self) -> float:
        """``3 lambda + 2 mu`` (three times the bulk modulus)."""
        return 3 * self.lam + 2 * self.mu

    def with_b(self, b: float) -> MaterialParams:
        return replace(self, b=b)


@dataclass(frozen=True)
class MaterialState:
    sigma: np.ndarray = field(default_factory=lambda: np.zeros(6))
    moment: np.ndarray = field(default_factory=zero_moment)
    f: float = 0.0
    E: float = 0.0

    def __post_init__(self):
        if not 0 <= self.f < 1:
            raise ValueError(f"porosity must lie in [0, 1), got {self.f}")
        if self.E < 0:
            raise ValueError("hardening strain must be >= 0")


@dataclass(frozen=True)
class TrialState:
    """Elastic predictor ``(sigma*, M*)`` and its invariant split."""

    sigma_star: np.ndarray
    moment_star: np.ndarray

    @property
    def sigma_eq(self) -> float:
        return vonmises_eq(self.sigma_star)

    @property
    def sigma_m(self) -> float:
        return deviator_mean(self.sigma_star)[1]

    @property
    def sigma_dev(self) -> np.ndarray:
        return deviator_mean(self.sigma_star)[0]

    @property
    def moment_mean(self) -> np.ndarray:
        return moment_mean_dev(self.moment_star)[0]

    @property
    def moment_dev(self) -> np.ndarray:
        return moment_mean_dev(self.moment_star)[1]


def effective_porosity(f: float, params: MaterialParams) -> float:
    """``p = q f*`` with the accelerated porosity past ``f_c``."""
    if not 0 <= f < 1:
        raise ValueError(f"porosity must lie in [0, 1), got {f}")
    if f <= params.f_c:
        return params.q * f
    return params.q * (params.f_c + params.delta * (f - params.f_c))


def stress_increment(d_eps: np.ndarray, params: MaterialParams) -> np.ndarray:
    d_eps = np.asarray(d_eps, dtype=float)
    return params.lam * (d_eps[0] + d_eps[1] + d_eps[2]) * IDENTITY + 2 * params.mu * d_eps


def elastic_u_vector(d_gradw: np.ndarray, params: MaterialParams) -> np.ndarray:
    """Vector ``U^e`` that keeps the moment increment trace-free."""
    g = np.asarray(d_gradw, dtype=float)
    tr_first = g[0] + g[1] + g[2]  # G_hhk
    # G_ihh: sum over the last two indices
    tr_last = np.array(
        [
            g[0, 0] + g[3, 1] + g[4, 2],
            g[3, 0] + g[1, 1] + g[5, 2],
            g[4, 0] + g[5, 1] + g[2, 2],
        ]
    )
    lam, mu = params.lam, params.mu
    return (lam * tr_first + 2 * mu * tr_last) / (2 * lam + 8 * mu)


def moment_increment(d_gradw: np.ndarray, params: MaterialParams) -> np.ndarray:
    """Elastic moment increment for a strain-gradient increment, U^e eliminated."""
    g = np.asarray(d_gradw, dtype=float)
    lam, mu = params.lam, params.mu
    u = elastic_u_vector(g, params)
    tr_first = g[0] + g[1] + g[2]
    out = 2 * mu * g
    out[:3] += lam * (tr_first - 2 * u)
    # -2 mu (delta_ik U_j + delta_jk U_i), packed pair (i, j)
    out[0, 0] -= 4 * mu * u[0]
    out[1, 1] -= 4 * mu * u[1]
    out[2, 2] -= 4 * mu * u[2]
    out[3, 0] -= 2 * mu * u[1]
    out[3, 1] -= 2 * mu * u[0]
    out[4, 0] -= 2 * mu * u[2]
    out[4, 2] -= 2 * mu * u[0]
    out[5, 1] -= 2 * mu * u[2]
    out[5, 2] -= 2 * mu * u[1]
    return params.b**2 / 5.0 * out


def elastic_predictor(
    state: MaterialState, d_eps: np.ndarray, d_gradw: np.ndarray, params: MaterialParams
) -> TrialState:
    return TrialState(
        sigma_star=state.sigma + stress_increment(d_eps, params),
        moment_star=state.moment + moment_increment(d_gradw, params),
    )


def yield_function(
    sigma: np.ndarray, moment: np.ndarray, sigma_bar: float, p: float, params: MaterialParams
) -> float:
    """Gurson-like criterion with the moment contribution ``Q^2 / b^2``."""
    if sigma_bar <= 0:
        raise ValueError("sigma_bar must be positive")
    seq = vonmises_eq(sigma)
    sm = deviator_mean(sigma)[1]
    m_i, m_ii = moment_invariants(moment)
    q2 = params.a_one * m_i + params.a_two * m_ii
    return (
        (seq**2 + q2 / params.b**2) / sigma_bar**2
        + 2 * p * math.cosh(1.5 * sm / sigma_bar)
        - 1
        - p**2
    )


def yield_normal(
    sigma: np.ndarray, moment: np.ndarray, sigma_bar: float, p: float, params: MaterialParams
) -> tuple[np.ndarray, np.ndarray]:
    """Derivatives of the yield function w.r.t. tensor components.

    These are the full-index derivatives; a packed off-diagonal entry is the
    derivative with respect to one of the two equal components.
    """
    if sigma_bar <= 0:
        raise ValueError("sigma_bar must be positive")
    dev, sm = deviator_mean(sigma)
    d_sigma = 3 * dev / sigma_bar**2 + (p / sigma_bar) * math.sinh(1.5 * sm / sigma_bar) * IDENTITY
    mean, mdev = moment_mean_dev(moment)
    d_moment = 3 * params.a_two * mdev
    d_moment[:3] += (2.0 / 3.0) * params.a_one * mean
    return d_sigma, d_moment / (sigma_bar**2 * params.b**2)


def mean_stress_on_locus(phi: float, p: float) -> tuple[float, float]:
    """Reduced mean stress ``Sigma_m / sigma_bar`` along the locus and its
    derivative with respect to ``phi``.

    Uses ``arccosh(1 + x) = 2 asinh(sqrt(x / 2))``, which makes the sign of
    ``phi`` come out naturally and keeps the derivative finite at ``phi = 0``.
    """
    k = (1 - p) ** 2 / (2 * p)
    s, c = math.sin(phi), math.cos(phi)
    sm = (4.0 / 3.0) * math.asinh(math.sqrt(0.5 * k) * s)
    dsm = (4.0 / 3.0) * math.sqrt(k) * c / math.sqrt(2 + k * s * s)
    return sm, dsm


class IncompressibleLimit(ValueError):
    """Raised when the locus is parametrized with ``p = 0``."""


def parametrize_locus(phi: float, p: float, sigma_bar: float) -> tuple[float, float, float]:
    """Point of the yield locus for angle ``phi``.

    Returns
    -------
    rhs_eq2 : float
        ``(1 - p)^2 sigma_bar^2 cos^2 phi``, the value of
        ``Sigma_eq^2 + Q^2 / b^2`` on the locus.
    sigma_m : float
        Mean stress on the locus.
    dsigma_m_dphi : float
    """
    if not -math.pi / 2 - 1e-15 <= phi <= math.pi / 2 + 1e-15:
        raise ValueError("phi must lie in [-pi/2, pi/2]")
    if p <= 0:
        raise IncompressibleLimit("p = 0: the mean stress is not constrained by the locus")
    if p >= 1:
        raise ValueError("p must be < 1")
    sm, dsm = mean_stress_on_locus(phi, p)
    return (1 - p) ** 2 * sigma_bar**2 * math.cos(phi) ** 2, sigma_bar * sm, sigma_bar * dsm


def moment_trace_error(moment: np.ndarray) -> float:
    """``max_i |M_ijj|`` relative to ``||M||`` (0 for a zero tensor)."""
    nrm = norm3(moment)
    if nrm == 0:
        return 0.0
    return float(np.max(np.abs(moment_trace(moment)))) / nrm
