"""Consistent tangent of the material update, plus elastic and finite-difference tangents.

All blocks are derivatives with respect to *packed* components: an
off-diagonal packed entry of an increment moves both symmetric tensor
components at once.  With this convention the elastic shear stiffness on the
diagonal of ``dsig_deps`` is ``2 mu``.

Moment-like quantities are flattened row-major from ``(6, 3)`` to 18 entries.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hardening import hardening_stress
from .integrate import integrate_step
from .material import (
    MaterialParams,
    MaterialState,
    TrialState,
    mean_stress_on_locus,
    moment_increment,
    stress_increment,
)
from .projection import ProjectionOptions, ProjectionSolution, reduce_trial, rigid_deviator
from .tensors import IDENTITY, MULT, norm2, norm3

BLOCKS = ("dsig_deps", "dsig_dgradw", "dm_deps", "dm_dgradw")


class SingularTangent(ArithmeticError):
    """The linearized projection system cannot be inverted at this point."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


@dataclass
class TangentBlocks:
    dsig_deps: np.ndarray  # (6, 6)
    dsig_dgradw: np.ndarray  # (6, 18)
    dm_deps: np.ndarray  # (18, 6)
    dm_dgradw: np.ndarray  # (18, 18)

    def as_matrix(self) -> np.ndarray:
        """Full ``(24, 24)`` operator mapping ``(d_eps, d_gradw)`` to ``(d_sigma, d_moment)``."""
        return np.block([[self.dsig_deps, self.dsig_dgradw], [self.dm_deps, self.dm_dgradw]])

    @classmethod
    def from_matrix(cls, k: np.ndarray) -> TangentBlocks:
        return cls(k[:6, :6].copy(), k[:6, 6:].copy(), k[6:, :6].copy(), k[6:, 6:].copy())

    def apply(self, d_eps: np.ndarray, d_gradw: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        x = np.concatenate([np.asarray(d_eps, float), np.asarray(d_gradw, float).ravel()])
        y = self.as_matrix() @ x
        return y[:6], y[6:].reshape(6, 3)


def _unit_directions(params: MaterialParams):
    """Trial-state images of the 24 packed unit increments."""
    d_sig = np.zeros((24, 6))
    d_mom = np.zeros((24, 6, 3))
    for a in range(6):
        e = np.zeros(6)
        e[a] = 1.0
        d_sig[a] = stress_increment(e, params)
    for a in range(18):
        g = np.zeros(18)
        g[a] = 1.0
        d_mom[6 + a] = moment_increment(g.reshape(6, 3), params)
    return d_sig, d_mom


def _blocks_from_columns(d_sig: np.ndarray, d_mom: np.ndarray) -> TangentBlocks:
    """Columns of the responses to the 24 unit directions -> blocks."""
    k = np.concatenate([d_sig, d_mom.reshape(24, 18)], axis=1).T
    return TangentBlocks.from_matrix(k)


def elastic_tangent(params: MaterialParams) -> TangentBlocks:
    d_sig, d_mom = _unit_directions(params)
    return _blocks_from_columns(d_sig, d_mom)


# batched helpers: leading axis runs over directions
def _ddot(a, b):
    return np.einsum("...a,a,...a->...", a, MULT, b)


def _tdot(a, b):
    return np.einsum("...ak,a,...ak->...", a, MULT, b)


def _dev_mean(t):
    mean = t[..., :3].sum(axis=-1) / 3.0
    return t - mean[..., None] * IDENTITY, mean


def _mom_mean_dev(m):
    mean = m[..., :3, :].sum(axis=-2) / 3.0
    dev = m.copy()
    dev[..., :3, :] -= mean[..., None, :]
    return mean, dev


def _trace_last(m):
    return np.stack(
        [
            m[..., 0, 0] + m[..., 3, 1] + m[..., 4, 2],
            m[..., 3, 0] + m[..., 1, 1] + m[..., 5, 2],
            m[..., 4, 0] + m[..., 5, 1] + m[..., 2, 2],
        ],
        axis=-1,
    )


def _rigid_batch(u):
    return np.stack([rigid_deviator(x) for x in np.atleast_2d(u)])


class _ReducedLinearization:
    """Linearization of the projection at fixed matrix yield stress, in
    reduced variables, around a converged solution."""

    def __init__(self, sol: ProjectionSolution, trial: TrialState, params: MaterialParams):
        if sol.method not in ("nested", "von-mises"):
            raise SingularTangent(
                f"no analytic tangent on the {sol.method!r} branch (vanishing trial deviator)",
                {"method": sol.method},
            )
        self.params = params
        self.red = reduce_trial(trial, sol.sigma_bar, params)
        self.p = sol.p
        self.phi = sol.phi
        self.s = sol.s
        self.corr = self.red.at(self.s)
        if self.p > 0:
            self.sm, self.dsm = mean_stress_on_locus(self.phi, self.p)
        else:
            self.sm, self.dsm = self.red.sm_star, 0.0

    def _inputs(self, dsig, dmom):
        red = self.red
        ddev, dsm_star = _dev_mean(dsig)
        dmean, dmdev = _mom_mean_dev(dmom)
        ds_star = 1.5 * _ddot(red.dev_star, ddev) / red.s_star
        return {
            "ddev": ddev,
            "dsm_star": dsm_star,
            "ds_star": ds_star,
            "dmean": dmean,
            "dmdev": dmdev,
            "dv": _trace_last(dmdev),
            "dmdev_sq": 2 * _tdot(red.mdev_star, dmdev),
        }

    def _correction(self, ds, z):
        """Tangents of the s-dependent correction for variations ``(ds, z)``."""
        red, c = self.red, self.corr
        a1, a2, c1, b2 = red.a_one, red.a_two, red.c1, red.b**2
        out = {}
        dd1 = ds * (1 - c1 * a1) + c1 * a1 * z["ds_star"]
        dd2 = ds * (1 - a2 / 5.0) + (a2 / 5.0) * z["ds_star"]
        dd = -(2.0 / 9.0) * dd2 / c.d2**2 - c1 * dd1 / c.d1**2
        n = red.v / c.d2 + red.mean_star / c.d1
        dn = (
            z["dv"] / c.d2
            - np.outer(dd2, red.v) / c.d2**2
            + z["dmean"] / c.d1
            - np.outer(dd1, red.mean_star) / c.d1**2
        )
        du = dn / c.d - np.outer(dd, n) / c.d**2
        mm = red.mean_star - c1 * c.u
        dmm = z["dmean"] - c1 * du
        dm1 = 2 * dmm @ mm
        dm2 = 1.5 * (
            z["dmdev_sq"] - (4.0 / 15.0) * (z["dv"] @ c.u + du @ red.v) + (8.0 / 135.0) * (du @ c.u)
        )
        root = math.sqrt(1 + a1 * c.m_one / (b2 * c.d1**2) + a2 * c.m_two / (b2 * c.d2**2))
        dsq = (
            a1 * (dm1 / c.d1**2 - 2 * c.m_one * dd1 / c.d1**3)
            + a2 * (dm2 / c.d2**2 - 2 * c.m_two * dd2 / c.d2**3)
        ) / b2
        out.update(dd1=dd1, dd2=dd2, du=du, dmm=dmm, root=root, droot=dsq / (2 * root))
        return out

    def jvp(self, dsig: np.ndarray, dmom: np.ndarray):
        """Variations of the reduced outputs for a batch of reduced trial variations.

        Returns ``(dsig_out (n, 6), dmom_out (n, 6, 3), dwork (n,))``.
        """
        red, p, s = self.red, self.p, self.s
        n_dir = dsig.shape[0]
        z = self._inputs(dsig, dmom)
        zero = np.zeros(n_dir)
        # G = s S - (1 - p) cos(phi)
        c_s = self._correction(np.ones(n_dir), {k: np.zeros_like(v) for k, v in z.items()})
        c_z = self._correction(zero, z)
        g_s = c_s["root"] + s * c_s["droot"][0]
        g_z = s * c_z["droot"]
        if g_s == 0:
            raise SingularTangent("dG/ds vanishes at the solution", {"s": s})
        if p > 0:
            sh, ch = math.sinh(1.5 * self.sm), math.cosh(1.5 * self.sm)
            g_phi = (1 - p) * math.sin(self.phi)
            f_sm = -red.ratio * s - 1.5 * p * (red.s_star - s) * ch
            f_phi = f_sm * self.dsm
            f_s = red.ratio * (red.sm_star - self.sm) + p * sh
            f_z = red.ratio * z["dsm_star"] * s - p * z["ds_star"] * sh
            det = g_phi * f_s - g_s * f_phi
            if det == 0 or abs(det) <= 1e-14 * (abs(g_phi * f_s) + abs(g_s * f_phi)):
                raise SingularTangent("linearized projection system is singular", {"phi": self.phi, "s": s})
            # [g_phi g_s; f_phi f_s] [dphi; ds] = -[g_z; f_z]
            dphi = (-g_z * f_s + g_s * f_z) / det
            ds = (-g_phi * f_z + f_phi * g_z) / det
            dsm = self.dsm * dphi
        else:
            ds = -g_z / g_s
            dsm = z["dsm_star"]

        c = self._correction(ds, z)
        corr = self.corr
        # stress
        dev_star = red.dev_star
        dsig_out = (
            np.outer(ds / red.s_star - s * z["ds_star"] / red.s_star**2, dev_star)
            + (s / red.s_star) * z["ddev"]
            + np.outer(dsm, IDENTITY)
        )
        # moment
        mean_cc, dev_cc = red.corrected_moments(corr)
        dmean_cc = c["dmm"]
        ddev_cc = z["dmdev"] - _rigid_batch(c["du"]) / 15.0
        r1, r2 = s / corr.d1, s / corr.d2
        dr1 = ds / corr.d1 - s * c["dd1"] / corr.d1**2
        dr2 = ds / corr.d2 - s * c["dd2"] / corr.d2**2
        dmom_out = dr2[:, None, None] * dev_cc + r2 * ddev_cc
        dmom_out[:, :3, :] += (dr1[:, None] * mean_cc + r1 * dmean_cc)[:, None, :]

        # reduced plastic work
        pr = self.params
        bb = pr.b**2 / 5.0
        dev_out = (s / red.s_star) * dev_star
        sm_out = self.sm
        mean_out, mdev_out = r1 * mean_cc, r2 * dev_cc
        ddev_out, dsm_out = _dev_mean(dsig_out)
        dmean_out, dmdev_out = _mom_mean_dev(dmom_out)
        dw = (
            (_ddot(ddev_out, dev_star - dev_out) + _ddot(dev_out, z["ddev"] - ddev_out)) / (2 * pr.mu)
            + 3 * (dsm_out * (red.sm_star - sm_out) + sm_out * (z["dsm_star"] - dsm_out)) / pr.bulk3
            + (_tdot(dmdev_out, red.mdev_star - mdev_out) + _tdot(mdev_out, z["dmdev"] - dmdev_out))
            / (2 * pr.mu * bb)
            + 3 * (dmean_out @ (red.mean_star - mean_out) + (z["dmean"] - dmean_out) @ mean_out) / (pr.bulk3 * bb)
        )
        return dsig_out, dmom_out, dw

    def work(self) -> float:
        red, corr, s, pr = self.red, self.corr, self.s, self.params
        bb = pr.b**2 / 5.0
        dev_out = (s / red.s_star) * red.dev_star
        mean_cc, dev_cc = red.corrected_moments(corr)
        mean_out, mdev_out = (s / corr.d1) * mean_cc, (s / corr.d2) * dev_cc
        return (
            _ddot(dev_out, red.dev_star - dev_out) / (2 * pr.mu)
            + 3 * self.sm * (red.sm_star - self.sm) / pr.bulk3
            + _tdot(mdev_out, red.mdev_star - mdev_out) / (2 * pr.mu * bb)
            + 3 * float(mean_out @ (red.mean_star - mean_out)) / (pr.bulk3 * bb)
        )


def consistent_tangent(
    solution: ProjectionSolution, trial: TrialState, state: MaterialState, params: MaterialParams
) -> TangentBlocks:
    """Exact derivative of the implicit update (hardening included, porosity frozen)."""
    lin = _ReducedLinearization(solution, trial, params)
    sbar = solution.sigma_bar
    d_sig, d_mom = _unit_directions(params)
    # one extra direction: the reduced trial state itself
    z_sig = trial.sigma_star / sbar
    z_mom = trial.moment_star / sbar
    jac_sig, jac_mom, jac_w = lin.jvp(
        np.vstack([d_sig, z_sig[None]]), np.concatenate([d_mom, z_mom[None]], axis=0)
    )
    # the jvp is taken w.r.t. reduced variables; d(z*)/sbar enters linearly
    jac_sig[:24] /= sbar
    jac_mom[:24] /= sbar
    jac_w[:24] /= sbar
    _, h = hardening_stress(state.E + solution.delta_E, params.hardening)
    sig_red = solution.sigma / sbar
    mom_red = solution.moment / sbar
    if h == 0:
        dsbar = np.zeros(24)
    else:
        denom = (1 - state.f) - h * (lin.work() - jac_w[24])
        if denom == 0 or abs(denom) <= 1e-14 * (1 - state.f):
            raise SingularTangent("hardening coupling denominator vanishes", {"h": h})
        # jac_w[:24] = grad(w) . dz* / sbar, the un-normalized gradient needs sbar back
        dsbar = h * jac_w[:24] * sbar / denom
    # dX = dsbar (X~ - DX~ . z~*) + DX~ . dz*
    out_sig = np.outer(dsbar, sig_red - jac_sig[24]) + jac_sig[:24] * sbar
    out_mom = dsbar[:, None, None] * (mom_red - jac_mom[24]) + jac_mom[:24] * sbar
    return _blocks_from_columns(out_sig, out_mom)


def tangent_for_step(info, state: MaterialState, params: MaterialParams) -> TangentBlocks:
    """Tangent matching an :func:`integrate_step` result; elastic if the step was."""
    if not info.plastic:
        return elastic_tangent(params)
    return consistent_tangent(info.solution, info.trial, state, params)


def fd_tangent(
    state: MaterialState,
    d_eps: np.ndarray,
    d_gradw: np.ndarray,
    params: MaterialParams,
    step: float = 1e-5,
    opts: ProjectionOptions | None = None,
) -> tuple[TangentBlocks, dict]:
    """Central differences of the stored ``(sigma, moment)`` of :func:`integrate_step`.

    The strain step is ``step * ||(d_eps, b d_gradw)||`` and the gradient step
    is that divided by ``b``.  The projection is exact to roundoff, so the
    differences carry an error of about ``1e-15 |sigma| / h``; relative steps
    much below ``1e-5`` become noise dominated.  Returns ``(blocks, info)``
    where ``info`` records the absolute steps and an ``unreliable`` flag at
    the roundoff floor.
    """
    d_eps = np.asarray(d_eps, dtype=float)
    d_gradw = np.asarray(d_gradw, dtype=float)
    size = math.hypot(norm2(d_eps), params.b * norm3(d_gradw))
    eps_y = params.hardening.evaluate(state.E)[0] / params.mu
    h_eps = step * max(size, 1e-3 * eps_y)
    h_g = h_eps / params.b
    x0 = np.concatenate([d_eps, d_gradw.ravel()])

    def run(x):
        new, _ = integrate_step(state, x[:6], x[6:].reshape(6, 3), params, opts)
        return new.sigma, new.moment

    cols_sig = np.zeros((24, 6))
    cols_mom = np.zeros((24, 6, 3))
    used = np.zeros(24)
    for a in range(24):
        h = h_eps if a < 6 else h_g
        for attempt in range(3):
            e = np.zeros(24)
            e[a] = h
            try:
                sp, mp = run(x0 + e)
                sm, mm = run(x0 - e)
                break
            except Exception:
                if attempt == 2:
                    raise
                h = h * (10.0 if attempt == 0 else 0.01)
        cols_sig[a] = (sp - sm) / (2 * h)
        cols_mom[a] = (mp - mm) / (2 * h)
        used[a] = h
    info = {"step_eps": h_eps, "step_gradw": h_g, "steps": used, "unreliable": step <= 1e-12}
    return _blocks_from_columns(cols_sig, cols_mom), info


@dataclass
class TangentDiagnostics:
    errors: dict  # block name -> max relative error
    worst: dict  # block name -> (row, col)
    step: float
    unreliable: bool = False

    @property
    def max_error(self) -> float:
        return max(self.errors.values())


def tangent_report(analytic: TangentBlocks, fd: TangentBlocks, step: float = math.nan, unreliable: bool = False):
    """Per-block max relative error, denominator ``max(|fd|, 1e-3 max|fd|)``."""
    errors, worst = {}, {}
    for name in BLOCKS:
        a = getattr(analytic, name)
        f = getattr(fd, name)
        if a.shape != f.shape:
            raise ValueError(f"shape mismatch in {name}: {a.shape} vs {f.shape}")
        scale = np.max(np.abs(f)) if f.size else 0.0
        if scale == 0:
            diff = np.abs(a - f)
            errors[name] = float(diff.max()) if diff.size else 0.0
            idx = np.unravel_index(int(np.argmax(diff)), diff.shape) if diff.size else (0, 0)
        else:
            rel = np.abs(a - f) / np.maximum(np.abs(f), 1e-3 * scale)
            idx = np.unravel_index(int(np.argmax(rel)), rel.shape)
            errors[name] = float(rel[idx])
        worst[name] = tuple(int(i) for i in idx)
    return TangentDiagnostics(errors, worst, step, unreliable)
