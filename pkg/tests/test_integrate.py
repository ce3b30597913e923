import numpy as np
import pytest

from glpd.corpus import CounterRng, a508_params, plastic_corpus
from glpd.integrate import PlasticIncrements, integrate_step, plastic_increments
from glpd.material import MaterialState, moment_increment, stress_increment, yield_function
from glpd.tensors import IDENTITY, sym, zero_moment


def test_elastic_step_keeps_internal_variables(params):
    st = MaterialState(f=0.003, E=0.01)
    new, info = integrate_step(st, sym(1e-4, -2e-5), zero_moment(), params)
    assert not info.plastic
    np.testing.assert_array_equal(new.sigma, info.trial.sigma_star)
    assert (new.f, new.E) == (0.003, 0.01)


def test_plastic_increments_invert_elastic_law():
    for c in plastic_corpus(30, 10):
        new, info = integrate_step(c.state, c.d_eps, c.d_gradw, c.params)
        inc = info.increments
        ds = info.trial.sigma_star - new.sigma
        dm = info.trial.moment_star - new.moment
        np.testing.assert_allclose(stress_increment(inc.d_eps, c.params), ds, atol=1e-12 * np.abs(ds).max())
        np.testing.assert_allclose(moment_increment(inc.d_gradw, c.params), dm, atol=1e-12 * np.abs(dm).max())


def test_porosity_update_uses_plastic_dilatation():
    for c in plastic_corpus(31, 10):
        new, info = integrate_step(c.state, c.d_eps, c.d_gradw, c.params)
        tr = info.increments.d_eps[:3].sum()
        assert new.f == pytest.approx(c.state.f + (1 - c.state.f) * tr, rel=1e-14, abs=1e-18)
        assert new.E == pytest.approx(c.state.E + info.solution.delta_E)


def test_uniaxial_porosity_growth(params):
    st = MaterialState(f=0.00016)
    fs = [st.f]
    for _ in range(30):
        st, info = integrate_step(st, sym(0.0, 5e-4), zero_moment(), params)
        tr = info.increments.d_eps[:3].sum()
        assert (st.f > fs[-1]) == (tr > 0)
        fs.append(st.f)
    assert np.all(np.diff(fs) >= 0)
    assert fs[-1] > fs[0]


def test_yield_consistency_after_plastic_steps():
    for c in plastic_corpus(32, 20):
        _, info = integrate_step(c.state, c.d_eps, c.d_gradw, c.params)
        assert abs(info.yield_value) <= 1e-9


def test_material_failure_flag():
    params = a508_params(q=1.0, f_c=0.95, delta=1.0)
    st = MaterialState(f=0.9)
    new, info = integrate_step(st, 0.4 * IDENTITY, zero_moment(), params)
    assert info.failed
    assert new.f < 1


def test_no_elastic_domain_is_an_error(params):
    from glpd.projection import ProjectionError

    with pytest.raises(ProjectionError):
        integrate_step(MaterialState(f=0.3), 0.05 * IDENTITY, zero_moment(), params)


def test_explicit_mode_uses_frozen_increments(params):
    prev = PlasticIncrements(sym(1e-4, -5e-5, -5e-5), zero_moment())
    st = MaterialState(sym(100.0), zero_moment(), 0.0, 0.0)
    d_eps = sym(2e-4)
    new, info = integrate_step(st, d_eps, zero_moment(), params, mode="explicit", previous=prev)
    np.testing.assert_allclose(info.sigma_explicit, st.sigma + stress_increment(d_eps - prev.d_eps, params))
    implicit, _ = integrate_step(st, d_eps, zero_moment(), params)
    np.testing.assert_array_equal(new.sigma, implicit.sigma)


def test_unknown_mode_rejected(params):
    with pytest.raises(ValueError):
        integrate_step(MaterialState(), np.zeros(6), zero_moment(), params, mode="rk4")


def test_moment_only_path_loads_toward_moment_surface():
    params = a508_params(b=0.4)
    rng = CounterRng(33)
    g = rng.normals(6, 3)
    g *= 2e-3 / np.abs(g).max()
    st = MaterialState()
    for _ in range(40):
        st, info = integrate_step(st, np.zeros(6), g, params)
    assert info.plastic
    assert np.abs(st.sigma).max() < 1e-8
    sbar = params.hardening.evaluate(st.E)[0]
    assert yield_function(st.sigma, st.moment, sbar, 0.0, params) == pytest.approx(0.0, abs=1e-9)
