"""Implicit projection of the elastic predictor onto the GLPD yield locus.

For a fixed matrix yield stress the problem reduces to two scalar unknowns,
the locus angle ``phi`` and the reduced equivalent stress
``s = Sigma_eq / sigma_bar``.  ``F(phi) = 0`` is solved by safeguarded
Newton iterations on ``phi``; for each ``phi`` the companion equation
``G(phi, s) = 0`` is solved for ``s`` by Newton sub-iterations.  The matrix
yield stress is then found by fixed-point iterations on the hardening law,
with the porosity frozen.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hardening import hardening_stress
from .material import (
    MaterialParams,
    MaterialState,
    TrialState,
    effective_porosity,
    mean_stress_on_locus,
    yield_function,
)
from .tensors import IDENTITY, ddot, deviator_mean, moment_mean_dev, tdot

EPS = 2.220446049250313e-16
N_SCAN = 181


class ProjectionError(RuntimeError):
    """Projection failed; ``diagnostics`` carries the trial state and history."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


@dataclass(frozen=True)
class ProjectionOptions:
    tol_f: float = 1e-12
    tol_g: float = 1e-12
    max_outer: int = 100
    max_inner: int = 50
    hardening_tol: float = 1e-10
    max_hardening: int = 50
    relax_after: int = 10
    # below this reduced trial equivalent stress the (phi, s) parametrization
    # is degenerate and the multiplier formulation takes over
    degenerate_seq: float = 1e-10


@dataclass(frozen=True)
class Correction:
    """Quantities of the reduced problem that depend on the running ``s``."""

    d1: float
    d2: float
    d: float
    u: np.ndarray
    m_one: float  # M_I** (reduced)
    m_two: float  # M_II** (reduced)


@dataclass(frozen=True)
class ReducedTrial:
    """Trial quantities divided by the current matrix yield stress."""

    sigma_bar: float
    s_star: float
    sm_star: float
    dev_star: np.ndarray
    mean_star: np.ndarray  # M~*_m
    mdev_star: np.ndarray  # M~*'
    v: np.ndarray  # M~*'_ijj
    mdev_sq: float
    c1: float  # (3 lambda + 2 mu) / (45 mu)
    a_one: float
    a_two: float
    b: float
    ratio: float  # 6 mu / (3 lambda + 2 mu)
    # dot products of the moment vectors, enough for the scalar invariants
    mm: float = 0.0
    vv: float = 0.0
    mv: float = 0.0

    def _d(self, s: float) -> tuple[float, float]:
        d1 = s + self.c1 * self.a_one * (self.s_star - s)
        d2 = s + self.a_two / 5.0 * (self.s_star - s)
        return d1, d2

    def at(self, s: float) -> Correction:
        d1, d2 = self._d(s)
        if d1 <= 0 or d2 <= 0:
            raise ProjectionError("parametrization breakdown: D1 or D2 <= 0", {"s": s, "d1": d1, "d2": d2})
        d = (2.0 / 9.0) / d2 + self.c1 / d1
        u = (self.v / d2 + self.mean_star / d1) / d
        mm = self.mean_star - self.c1 * u
        m_one = float(mm @ mm)
        m_two = 1.5 * (self.mdev_sq - (4.0 / 15.0) * float(self.v @ u) + (4.0 / 135.0) * float(u @ u))
        return Correction(d1, d2, d, u, m_one, max(m_two, 0.0))

    def at_multiplier(self, t: float) -> Correction:
        """Same as :meth:`at` but with ``s = s* / (1 + t)`` scaled out, so it
        stays meaningful when ``s* = 0``."""
        d1 = 1 + self.c1 * self.a_one * t
        d2 = 1 + self.a_two / 5.0 * t
        d = (2.0 / 9.0) / d2 + self.c1 / d1
        u = (self.v / d2 + self.mean_star / d1) / d
        mm = self.mean_star - self.c1 * u
        m_one = float(mm @ mm)
        m_two = 1.5 * (self.mdev_sq - (4.0 / 15.0) * float(self.v @ u) + (4.0 / 135.0) * float(u @ u))
        return Correction(d1, d2, d, u, m_one, max(m_two, 0.0))

    def corrected_moments(self, corr: Correction) -> tuple[np.ndarray, np.ndarray]:
        """``(M~**_m, M~**')`` packed."""
        u = corr.u
        mean = self.mean_star - self.c1 * u
        dev = self.mdev_star - rigid_deviator(u) / 15.0
        return mean, dev

    def trial_radius(self) -> float:
        """``sqrt(s*^2 + Q~*^2 / b^2)``."""
        m_one = float(self.mean_star @ self.mean_star)
        m_two = 1.5 * self.mdev_sq
        return math.sqrt(self.s_star**2 + (self.a_one * m_one + self.a_two * m_two) / self.b**2)


def rigid_deviator(u: np.ndarray) -> np.ndarray:
    """Packed ``u_j d_ik + u_i d_jk - 2/3 u_k d_ij``."""
    out = np.zeros((6, 3))
    for i in range(3):
        out[i, i] += 2 * u[i]
        out[i] -= (2.0 / 3.0) * u
    out[3, 0] += u[1]
    out[3, 1] += u[0]
    out[4, 0] += u[2]
    out[4, 2] += u[0]
    out[5, 1] += u[2]
    out[5, 2] += u[1]
    return out


def _trace_last(m: np.ndarray) -> np.ndarray:
    return np.array(
        [
            m[0, 0] + m[3, 1] + m[4, 2],
            m[3, 0] + m[1, 1] + m[5, 2],
            m[4, 0] + m[5, 1] + m[2, 2],
        ]
    )


def reduce_trial(trial: TrialState, sigma_bar: float, params: MaterialParams) -> ReducedTrial:
    if sigma_bar <= 0:
        raise ValueError("sigma_bar must be positive")
    dev, sm = deviator_mean(trial.sigma_star)
    mean, mdev = moment_mean_dev(trial.moment_star)
    dev, mean, mdev = dev / sigma_bar, mean / sigma_bar, mdev / sigma_bar
    v = _trace_last(mdev)
    return ReducedTrial(
        sigma_bar=sigma_bar,
        s_star=math.sqrt(1.5 * ddot(dev, dev)),
        sm_star=sm / sigma_bar,
        dev_star=dev,
        mean_star=mean,
        mdev_star=mdev,
        v=v,
        mdev_sq=tdot(mdev, mdev),
        c1=params.bulk3 / (45 * params.mu),
        a_one=params.a_one,
        a_two=params.a_two,
        b=params.b,
        ratio=6 * params.mu / params.bulk3,
        mm=float(mean @ mean),
        vv=float(v @ v),
        mv=float(mean @ v),
    )


def _root_factor(red: ReducedTrial, corr: Correction) -> float:
    b2 = red.b**2
    return math.sqrt(1 + red.a_one * corr.m_one / (b2 * corr.d1**2) + red.a_two * corr.m_two / (b2 * corr.d2**2))


def residual_G(phi: float, s: float, red: ReducedTrial, p: float) -> float:
    """``s * S(s) - (1 - p) cos(phi)``; zero on the locus."""
    return s * _root_factor(red, red.at(s)) - (1 - p) * math.cos(phi)


def residual_F(phi: float, s: float, red: ReducedTrial, p: float) -> float:
    """Reduced flow-rule relation between mean and equivalent stress."""
    sm, _ = mean_stress_on_locus(phi, p)
    return red.ratio * (red.sm_star - sm) * s - p * (red.s_star - s) * math.sinh(1.5 * sm)


def _g_and_slope(s: float, red: ReducedTrial) -> tuple[float, float]:
    """``s * S(s)`` and its derivative in ``s``.

    Written with ``U = alpha v + beta M*_m`` so that only the three scalar
    products ``mm, vv, mv`` of the trial moment vectors are needed.
    """
    c1, a1, a2 = red.c1, red.a_one, red.a_two
    e1 = 1 - c1 * a1
    e2 = 1 - a2 / 5.0
    d1 = s + c1 * a1 * (red.s_star - s)
    d2 = s + a2 / 5.0 * (red.s_star - s)
    if d1 <= 0 or d2 <= 0:
        raise ProjectionError("parametrization breakdown: D1 or D2 <= 0", {"s": s, "d1": d1, "d2": d2})
    d = (2.0 / 9.0) / d2 + c1 / d1
    dd = -(2.0 / 9.0) * e2 / d2**2 - c1 * e1 / d1**2
    al, be = 1 / (d2 * d), 1 / (d1 * d)
    dal = -(e2 * d + d2 * dd) * al * al
    dbe = -(e1 * d + d1 * dd) * be * be
    mm, vv, mv = red.mm, red.vv, red.mv
    g = 1 - c1 * be
    m_one = g * g * mm + c1 * c1 * al * al * vv - 2 * c1 * al * g * mv
    dm_one = -2 * c1 * dbe * g * mm + 2 * c1 * c1 * al * dal * vv - 2 * c1 * (dal * g - al * c1 * dbe) * mv
    vu = al * vv + be * mv
    uu = al * al * vv + 2 * al * be * mv + be * be * mm
    dvu = dal * vv + dbe * mv
    duu = 2 * al * dal * vv + 2 * (dal * be + al * dbe) * mv + 2 * be * dbe * mm
    m_two = 1.5 * (red.mdev_sq - (4.0 / 15.0) * vu + (4.0 / 135.0) * uu)
    dm_two = 1.5 * (-(4.0 / 15.0) * dvu + (4.0 / 135.0) * duu)
    if m_two < 0:
        m_two, dm_two = 0.0, 0.0
    b2 = red.b**2
    ssq = 1 + (a1 * m_one / d1**2 + a2 * m_two / d2**2) / b2
    dssq = (
        a1 * (dm_one / d1**2 - 2 * m_one * e1 / d1**3) + a2 * (dm_two / d2**2 - 2 * m_two * e2 / d2**3)
    ) / b2
    root = math.sqrt(ssq)
    return s * root, root + s * dssq / (2 * root)


def _safe_newton(fun, lo: float, hi: float, x0: float, tol: float, max_iter: int, f_lo=None, f_hi=None):
    """Newton iterations kept inside a sign-change bracket ``[lo, hi]``.

    ``fun(x) -> (value, slope)``.  Bisects whenever the Newton step leaves the
    bracket.  Once ``|value| <= tol`` a couple of extra steps polish the root
    down to roundoff.  Returns ``(x, value, iterations, history)``.
    """
    f_lo = fun(lo)[0] if f_lo is None else f_lo
    f_hi = fun(hi)[0] if f_hi is None else f_hi
    if f_lo == 0:
        return lo, 0.0, 0, [0.0]
    if f_hi == 0:
        return hi, 0.0, 0, [0.0]
    if f_lo * f_hi > 0:
        raise ProjectionError("no sign change in bracket", {"lo": lo, "hi": hi, "f_lo": f_lo, "f_hi": f_hi})
    if f_lo > 0:
        lo, hi = hi, lo  # keep fun(lo) < 0
    x = x0 if min(lo, hi) < x0 < max(lo, hi) else 0.5 * (lo + hi)
    history = []
    polish = 0
    for it in range(1, max_iter + 1):
        val, slope = fun(x)
        history.append(val)
        if val == 0:
            return x, val, it, history
        if val < 0:
            lo = x
        else:
            hi = x
        if abs(val) <= tol:
            polish += 1
            if polish >= 2:
                return x, val, it, history
        step = val / slope if slope != 0 else math.inf
        if abs(step) <= 2 * EPS * max(abs(x), 1e-300) and abs(val) <= tol:
            return x, val, it, history
        x_new = x - step
        if not (min(lo, hi) < x_new < max(lo, hi)):
            x_new = 0.5 * (lo + hi)
        if abs(hi - lo) <= 2 * EPS * max(abs(lo), abs(hi)) and abs(val) <= 1e3 * tol:
            return x, val, it, history
        x = x_new
    val = fun(x)[0]
    if abs(val) <= tol:
        return x, val, max_iter, history
    raise ProjectionError("Newton iterations did not converge", {"x": x, "residual": val, "history": history})


@dataclass
class ProjectionSolution:
    phi: float
    sigma_eq: float
    sigma_m: float
    sigma: np.ndarray
    moment: np.ndarray
    delta_E: float
    sigma_bar: float
    p: float
    s: float  # sigma_eq / sigma_bar
    method: str  # "nested", "von-mises" (p = 0), "multiplier" (s* ~ 0) or "elastic"
    iterations: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    hardening_history: list = field(default_factory=list)


@dataclass
class _FixedYield:
    """Solution of the projection for one matrix yield stress."""

    phi: float
    s: float
    sm: float  # reduced mean stress
    corr: Correction | None
    method: str
    outer: int = 0
    inner: int = 0
    res_f: float = 0.0
    res_g: float = 0.0


def _solve_s(phi: float, red: ReducedTrial, p: float, opts: ProjectionOptions, s_hint: float | None):
    """Inner problem: ``s`` solving ``G(phi, s) = 0``."""
    target = (1 - p) * math.cos(phi)
    if target <= 0:
        return 0.0, 0.0, 0
    hi = red.s_star
    g_hi = _g_and_slope(hi, red)[0] - target
    grow = 0
    # the root lies past s* when phi is outside the admissible range; the
    # bracket is grown while D2 stays positive
    while g_hi < 0:
        grow += 1
        hi *= 1.5
        if grow > 8 or hi - red.a_two / 5.0 * (hi - red.s_star) <= 0:
            raise ProjectionError("cannot bracket the equivalent stress", {"phi": phi})
        g_hi = _g_and_slope(hi, red)[0] - target

    def fun(s):
        val, slope = _g_and_slope(s, red)
        return val - target, slope

    x0 = s_hint if s_hint is not None else min(target, hi)
    s, res, it, _ = _safe_newton(fun, 0.0, hi, x0, opts.tol_g, opts.max_inner, -target, g_hi)
    return s, res, it


def _phi_limit(red: ReducedTrial, p: float) -> float:
    """Smallest ``|phi|`` for which the inner root satisfies ``s <= s*``."""
    r = red.trial_radius() / (1 - p)
    return 0.0 if r >= 1 else math.acos(r)


def _solve_fixed(red: ReducedTrial, p: float, opts: ProjectionOptions, phi_hint: float | None = None) -> _FixedYield:
    if red.s_star <= opts.degenerate_seq:
        return _solve_multiplier(red, p, opts)
    # the porous term cannot matter once it is below roundoff at the trial
    # mean stress, since projection only shrinks |sigma_m|
    if p == 0 or p * math.cosh(min(1.5 * abs(red.sm_star), 700.0)) <= EPS:
        s, res_g, inner = _solve_s(0.0, red, 0.0, opts, None)
        return _FixedYield(0.0, s, red.sm_star, red.at(s), "von-mises", 0, inner, 0.0, res_g)

    sign = 1.0 if red.sm_star >= 0 else -1.0
    if red.sm_star == 0:
        s, res_g, inner = _solve_s(0.0, red, p, opts, None)
        return _FixedYield(0.0, s, 0.0, red.at(s), "nested", 0, inner, 0.0, res_g)

    inner_total = 0
    last = {"phi": None, "s": None, "res_g": 0.0}

    def fun(phi):
        nonlocal inner_total
        s, res_g, it = _solve_s(phi, red, p, opts, last["s"])
        inner_total += it
        last.update(phi=phi, s=(s if s > 0 else None), res_g=res_g)
        sm, dsm = mean_stress_on_locus(phi, p)
        sh, ch = math.sinh(1.5 * sm), math.cosh(1.5 * sm)
        f = red.ratio * (red.sm_star - sm) * s - p * (red.s_star - s) * sh
        if s > 0:
            g_s = _g_and_slope(s, red)[1]
            ds = -(1 - p) * math.sin(phi) / g_s
        else:
            ds = 0.0
        f_s = red.ratio * (red.sm_star - sm) + p * sh
        f_sm = -red.ratio * s - 1.5 * p * (red.s_star - s) * ch
        return f, f_sm * dsm + f_s * ds

    lo = sign * _phi_limit(red, p)
    hi = sign * math.pi / 2
    x0 = phi_hint if phi_hint is not None and min(lo, hi) < phi_hint < max(lo, hi) else 0.5 * (lo + hi)
    try:
        phi, res_f, outer, _ = _safe_newton(fun, lo, hi, x0, opts.tol_f, opts.max_outer)
    except ProjectionError:
        phi, res_f, outer = _scan_and_bisect(fun, opts)
    if last["phi"] == phi:
        s, res_g = last["s"] or 0.0, last["res_g"]
    else:
        s, res_g, it = _solve_s(phi, red, p, opts, None)
        inner_total += it
    sm, _ = mean_stress_on_locus(phi, p)
    return _FixedYield(phi, s, sm, red.at(s), "nested", outer, inner_total, res_f, res_g)


def _scan_and_bisect(fun, opts: ProjectionOptions):
    """Fallback: scan ``phi`` on a 181-point grid, then bisect a sign change."""
    grid = np.linspace(-math.pi / 2, math.pi / 2, N_SCAN)
    vals = []
    for phi in grid:
        try:
            vals.append(fun(phi)[0])
        except ProjectionError:
            vals.append(math.nan)
    for k in range(N_SCAN - 1):
        a, b = vals[k], vals[k + 1]
        if math.isfinite(a) and math.isfinite(b) and a * b <= 0:
            lo, hi = grid[k], grid[k + 1]
            f_lo = a
            for it in range(200):
                mid = 0.5 * (lo + hi)
                f_mid = fun(mid)[0]
                if abs(f_mid) <= opts.tol_f or hi - lo < 4 * EPS:
                    return mid, f_mid, it + 1
                if (f_mid < 0) == (f_lo < 0):
                    lo, f_lo = mid, f_mid
                else:
                    hi = mid
    raise ProjectionError("outer iterations on phi failed, scan found no bracket", {"scan": vals})


def _solve_multiplier(red: ReducedTrial, p: float, opts: ProjectionOptions) -> _FixedYield:
    """Projection when the trial deviator vanishes.

    The equivalent stress carries no information on the plastic multiplier
    there, so ``t = 6 mu dEta / sigma_bar^2`` is used as the unknown.
    """
    from scipy.optimize import brentq

    k = p / red.ratio  # ((3 lambda + 2 mu) / (6 mu)) p
    b2 = red.b**2

    def mean_stress(t):
        if p == 0 or red.sm_star == 0:
            return red.sm_star
        g = lambda x: x - red.sm_star + k * t * math.sinh(1.5 * x)
        return brentq(g, 0.0, red.sm_star, xtol=1e-300, rtol=4 * EPS, maxiter=500)

    def phi_of(t):
        corr = red.at_multiplier(t)
        sm = mean_stress(t)
        s = red.s_star / (1 + t)
        q2 = red.a_one * corr.m_one / corr.d1**2 + red.a_two * corr.m_two / corr.d2**2
        return s**2 + q2 / b2 + 2 * p * math.cosh(1.5 * sm) - 1 - p**2

    if phi_of(0.0) <= 0:
        raise ProjectionError("trial state is not plastic", {})
    t_hi = 1.0
    while phi_of(t_hi) > 0:
        t_hi *= 4
        if t_hi > 1e30:
            raise ProjectionError("cannot bracket the plastic multiplier", {})
    t = brentq(phi_of, 0.0, t_hi, xtol=1e-300, rtol=4 * EPS, maxiter=500)
    corr = red.at_multiplier(t)
    sm = mean_stress(t)
    s = red.s_star / (1 + t)
    q2 = red.a_one * corr.m_one / corr.d1**2 + red.a_two * corr.m_two / corr.d2**2
    if p > 0:
        cphi = math.sqrt(max(s**2 + q2 / b2, 0.0)) / (1 - p)
        phi = math.copysign(math.acos(min(cphi, 1.0)), sm)
    else:
        phi = 0.0
    # express the moment ratios with the same convention as the nested path:
    # R1 = 1 / d1, R2 = 1 / d2, stored through d1, d2 with s = 1
    return _FixedYield(phi, s, sm, corr, "multiplier", 0, 0, 0.0, phi_of(t))


def _recover(red: ReducedTrial, fy: _FixedYield, trial: TrialState):
    """Non-reduced stress and moment from a reduced solution."""
    sbar = red.sigma_bar
    dev_star, _ = deviator_mean(trial.sigma_star)
    if red.s_star > 0:
        sigma = (fy.s / red.s_star) * dev_star + sbar * fy.sm * IDENTITY
    else:
        sigma = sbar * fy.sm * IDENTITY
    corr = fy.corr
    mean_cc, dev_cc = red.corrected_moments(corr)
    if fy.method == "multiplier":
        r1, r2 = 1 / corr.d1, 1 / corr.d2
    else:
        r1, r2 = fy.s / corr.d1, fy.s / corr.d2
    moment = r2 * dev_cc
    moment[:3] += r1 * mean_cc
    return sigma, sbar * moment


def hardening_increment(
    trial: TrialState, sigma: np.ndarray, moment: np.ndarray, sigma_bar: float, f: float, params: MaterialParams
) -> float:
    """Increment of the hardening strain from the plastic dissipation."""
    dev_s, sm_s = deviator_mean(trial.sigma_star)
    dev, sm = deviator_mean(sigma)
    mean_s, mdev_s = moment_mean_dev(trial.moment_star)
    mean, mdev = moment_mean_dev(moment)
    bb = params.b**2 / 5.0
    work = (
        ddot(dev, dev_s - dev) / (2 * params.mu)
        + 3 * sm * (sm_s - sm) / params.bulk3
        + tdot(mdev, mdev_s - mdev) / (2 * params.mu * bb)
        + 3 * float(mean @ (mean_s - mean)) / (params.bulk3 * bb)
    )
    return work / ((1 - f) * sigma_bar)


def project(
    trial: TrialState,
    state: MaterialState,
    params: MaterialParams,
    opts: ProjectionOptions | None = None,
) -> ProjectionSolution:
    """Return mapping at frozen porosity with fixed-point hardening."""
    opts = opts or ProjectionOptions()
    p = effective_porosity(state.f, params)
    if p >= 1:
        raise ProjectionError("effective porosity p >= 1: no elastic domain left", {"p": p})
    sbar0, _ = hardening_stress(state.E, params.hardening)
    if yield_function(trial.sigma_star, trial.moment_star, sbar0, p, params) <= 0:
        raise ProjectionError("trial state is not plastic", {"sigma_bar": sbar0})

    sbar = sbar0
    history = [sbar]
    phi_hint = None
    diag = {"trial_sigma": trial.sigma_star.copy(), "trial_moment": trial.moment_star.copy()}
    for it in range(1, opts.max_hardening + 1):
        red = reduce_trial(trial, sbar, params)
        if yield_function(trial.sigma_star, trial.moment_star, sbar, p, params) <= 0:
            # fixed-point overshoot: the trial is elastic for this yield stress
            fy, sigma, moment, d_e = None, trial.sigma_star.copy(), trial.moment_star.copy(), 0.0
        else:
            try:
                fy = _solve_fixed(red, p, opts, phi_hint)
            except ProjectionError as exc:
                exc.diagnostics.update(diag, sigma_bar_history=history)
                raise
            sigma, moment = _recover(red, fy, trial)
            d_e = hardening_increment(trial, sigma, moment, sbar, state.f, params)
            if d_e < 0:
                if d_e < -1e-10 * (sbar0 / params.mu):
                    raise ProjectionError("negative plastic dissipation", dict(diag, delta_E=d_e))
                d_e = 0.0
            phi_hint = fy.phi
        new_sbar, _ = hardening_stress(state.E + d_e, params.hardening)
        change = abs(new_sbar - sbar)
        converged = change <= opts.hardening_tol * sbar
        if converged and fy is not None:
            break
        if it >= opts.relax_after:
            new_sbar = 0.5 * (new_sbar + sbar)
        sbar = new_sbar
        history.append(sbar)
    else:
        raise ProjectionError("hardening fixed point did not converge", dict(diag, sigma_bar_history=history))

    # polish: a few more sweeps while the update is still above roundoff
    for _ in range(3):
        if change <= 4 * EPS * sbar:
            break
        sbar = new_sbar
        history.append(sbar)
        red = reduce_trial(trial, sbar, params)
        fy = _solve_fixed(red, p, opts, fy.phi)
        sigma, moment = _recover(red, fy, trial)
        d_e = hardening_increment(trial, sigma, moment, sbar, state.f, params)
        new_sbar, _ = hardening_stress(state.E + d_e, params.hardening)
        change = abs(new_sbar - sbar)

    dev, sm = deviator_mean(sigma)
    return ProjectionSolution(
        phi=fy.phi,
        sigma_eq=math.sqrt(1.5 * ddot(dev, dev)),
        sigma_m=sm,
        sigma=sigma,
        moment=moment,
        delta_E=d_e,
        sigma_bar=sbar,
        p=p,
        s=fy.s,
        method=fy.method,
        iterations={"outer": fy.outer, "inner": fy.inner, "hardening": len(history)},
        residuals={"F": abs(fy.res_f), "G": abs(fy.res_g)},
        hardening_history=history,
    )
