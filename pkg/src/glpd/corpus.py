"""Reproducible random test cases.

The generator is SplitMix64 used in counter mode, so any implementation can
regenerate the same cases from the same seed:

    x_i   = seed + (i + 1) * 0x9E3779B97F4A7C15        (mod 2**64)
    z     = (x_i ^ (x_i >> 30)) * 0xBF58476D1CE4E5B9
    z     = (z ^ (z >> 27)) * 0x94D049BB133111EB
    out_i = z ^ (z >> 31)

Uniform doubles in [0, 1) are ``(out_i >> 11) * 2**-53``.  Normal deviates use
the Box-Muller cosine branch on two consecutive uniforms ``u1, u2``:
``sqrt(-2 ln(1 - u1)) cos(2 pi u2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hardening import HardeningCurve
from .material import (
    MaterialParams,
    MaterialState,
    effective_porosity,
    elastic_predictor,
    moment_increment,
    yield_function,
)
from .tensors import moment_invariants, vonmises_eq

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(seed: int, i: int) -> int:
    z = (seed + (i + 1) * GOLDEN) & MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


class CounterRng:
    """Sequential reader over the SplitMix64 counter stream."""

    def __init__(self, seed: int):
        self.seed = int(seed) & MASK
        self.counter = 0

    def u64(self) -> int:
        out = splitmix64(self.seed, self.counter)
        self.counter += 1
        return out

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        return lo + (hi - lo) * ((self.u64() >> 11) * 2.0**-53)

    def normal(self) -> float:
        u1, u2 = self.uniform(), self.uniform()
        return math.sqrt(-2.0 * math.log1p(-u1)) * math.cos(2 * math.pi * u2)

    def normals(self, *shape: int) -> np.ndarray:
        n = int(np.prod(shape))
        return np.array([self.normal() for _ in range(n)]).reshape(shape)


def a508_params(b: float = 0.55, hardening: HardeningCurve | None = None, **kw) -> MaterialParams:
    """Steel constants used throughout the tests (E = 203000 MPa, nu = 0.3)."""
    hardening = hardening or HardeningCurve.power_law(450.0, 0.01, 0.1)
    return MaterialParams.from_young(203000.0, 0.3, b=b, hardening=hardening, **kw)


@dataclass(frozen=True)
class PlasticCase:
    params: MaterialParams
    state: MaterialState
    d_eps: np.ndarray
    d_gradw: np.ndarray


def _unit(v: np.ndarray) -> np.ndarray:
    return v / math.sqrt(float(np.sum(v * v)))


def random_state(rng: CounterRng, params: MaterialParams, moments: bool = True, f_max: float = 0.04) -> MaterialState:
    """Admissible state strictly inside the yield surface."""
    f = rng.uniform(0.0, f_max)
    e = rng.uniform(0.0, 0.05)
    sbar, _ = params.hardening.evaluate(e)
    p = effective_porosity(f, params)
    sigma = _unit(rng.normals(6)) * sbar
    moment = moment_increment(rng.normals(6, 3), params) if moments else np.zeros((6, 3))
    if moments:
        m_i, m_ii = moment_invariants(moment)
        q = math.sqrt(params.a_one * m_i + params.a_two * m_ii) / params.b
        moment = moment * (rng.uniform(0.1, 0.6) * sbar / q)
    # scale into the elastic domain
    level = rng.uniform(0.3, 0.9)
    lo, hi = 0.0, 1.0
    while yield_function(hi * sigma, hi * moment, sbar, p, params) < 0:
        hi *= 2
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if yield_function(mid * sigma, mid * moment, sbar, p, params) < 0:
            lo = mid
        else:
            hi = mid
    return MaterialState(level * lo * sigma, level * lo * moment, f, e)


def random_plastic_case(
    rng: CounterRng,
    moments: bool = True,
    porosity: bool = True,
    hardening: bool = True,
    max_tries: int = 200,
) -> PlasticCase:
    """Rejection-sample a state and increment whose trial state is plastic."""
    for _ in range(max_tries):
        b = rng.uniform(0.05, 0.6)
        curve = HardeningCurve.power_law(450.0, 0.01, 0.1) if hardening else HardeningCurve.perfect(450.0)
        params = a508_params(b=b, hardening=curve)
        state = random_state(rng, params, moments, 0.04 if porosity else 0.0)
        eps_y = 450.0 / 203000.0
        d_eps = _unit(rng.normals(6)) * rng.uniform(0.5, 4.0) * eps_y
        if moments:
            d_gradw = _unit(rng.normals(6, 3).ravel()).reshape(6, 3) * rng.uniform(0.2, 3.0) * eps_y / b
        else:
            d_gradw = np.zeros((6, 3))
        trial = elastic_predictor(state, d_eps, d_gradw, params)
        sbar, _ = params.hardening.evaluate(state.E)
        p = effective_porosity(state.f, params)
        if yield_function(trial.sigma_star, trial.moment_star, sbar, p, params) > 1e-3 and vonmises_eq(
            trial.sigma_star
        ) > 1e-3 * sbar:
            return PlasticCase(params, state, d_eps, d_gradw)
    raise RuntimeError("no plastic trial found; use larger increments")


def plastic_corpus(seed: int, n: int, **kw) -> list[PlasticCase]:
    rng = CounterRng(seed)
    return [random_plastic_case(rng, **kw) for _ in range(n)]
