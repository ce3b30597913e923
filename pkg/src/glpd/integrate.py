"""Material-point update over one load increment."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hardening import hardening_stress
from .material import (
    MaterialParams,
    MaterialState,
    TrialState,
    effective_porosity,
    elastic_predictor,
    moment_increment,
    stress_increment,
    yield_function,
)
from .projection import ProjectionOptions, ProjectionSolution, project
from .tensors import IDENTITY, deviator_mean, moment_mean_dev, zero_moment

MODES = ("implicit", "explicit")


@dataclass(frozen=True)
class PlasticIncrements:
    """Plastic parts of the strain and strain-gradient increments."""

    d_eps: np.ndarray = field(default_factory=lambda: np.zeros(6))
    d_gradw: np.ndarray = field(default_factory=zero_moment)


@dataclass
class StepInfo:
    trial: TrialState
    plastic: bool
    solution: ProjectionSolution | None
    increments: PlasticIncrements
    yield_value: float  # yield function of the stored state
    beyond_table: bool = False
    failed: bool = False
    # explicit mode only: stresses from the frozen plastic increments
    sigma_explicit: np.ndarray | None = None
    moment_explicit: np.ndarray | None = None


def plastic_increments(trial: TrialState, sigma: np.ndarray, moment: np.ndarray, params: MaterialParams):
    """Invert the elastic laws on ``trial - updated``."""
    dev, mean = deviator_mean(trial.sigma_star - sigma)
    d_eps = dev / (2 * params.mu) + (mean / params.bulk3) * IDENTITY
    bb = params.b**2 / 5.0
    mmean, mdev = moment_mean_dev(trial.moment_star - moment)
    d_gradw = mdev / (2 * params.mu * bb)
    d_gradw[:3] += mmean / (params.bulk3 * bb)
    return PlasticIncrements(d_eps, d_gradw)


def integrate_step(
    state: MaterialState,
    d_eps: np.ndarray,
    d_gradw: np.ndarray,
    params: MaterialParams,
    opts: ProjectionOptions | None = None,
    mode: str = "implicit",
    previous: PlasticIncrements | None = None,
) -> tuple[MaterialState, StepInfo]:
    """Advance ``state`` by the increments ``(d_eps, d_gradw)``.

    Both modes store the implicit projection.  In ``explicit`` mode the
    plastic increments of the previous step (``previous``) are additionally
    frozen to give the stresses used for equilibrium, returned in
    ``info.sigma_explicit`` / ``info.moment_explicit``.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    d_eps = np.asarray(d_eps, dtype=float)
    d_gradw = np.asarray(d_gradw, dtype=float)
    trial = elastic_predictor(state, d_eps, d_gradw, params)
    p = effective_porosity(state.f, params)
    sbar, _ = hardening_stress(state.E, params.hardening)
    phi_trial = yield_function(trial.sigma_star, trial.moment_star, sbar, p, params)

    if phi_trial <= 0:
        new_state = MaterialState(trial.sigma_star, trial.moment_star, state.f, state.E)
        info = StepInfo(trial, False, None, PlasticIncrements(), phi_trial)
    else:
        sol = project(trial, state, params, opts)
        inc = plastic_increments(trial, sol.sigma, sol.moment, params)
        tr_p = float(inc.d_eps[0] + inc.d_eps[1] + inc.d_eps[2])
        f_new = state.f + (1 - state.f) * tr_p
        failed = f_new >= 1
        if failed:
            f_new = np.nextafter(1.0, 0.0)
        f_new = max(f_new, 0.0)
        e_new = state.E + sol.delta_E
        new_state = MaterialState(sol.sigma, sol.moment, float(f_new), e_new)
        info = StepInfo(
            trial,
            True,
            sol,
            inc,
            yield_function(sol.sigma, sol.moment, sol.sigma_bar, sol.p, params),
            params.hardening.beyond_table(e_new),
            failed,
        )

    if mode == "explicit":
        prev = previous or PlasticIncrements()
        info.sigma_explicit = state.sigma + stress_increment(d_eps - prev.d_eps, params)
        info.moment_explicit = state.moment + moment_increment(d_gradw - prev.d_gradw, params)
    return new_state, info
