import numpy as np

from glpd.corpus import CounterRng, plastic_corpus, splitmix64
from glpd.material import effective_porosity, elastic_predictor, yield_function


def test_splitmix_reference_streams():
    # published reference outputs of the sequential generator
    assert [splitmix64(0, i) for i in range(3)] == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]
    assert [splitmix64(1234567, i) for i in range(5)] == [
        6457827717110365317,
        3203168211198807973,
        9817491932198370423,
        4593380528125082431,
        16408922859458223821,
    ]


def test_uniform_from_top_bits():
    rng = CounterRng(1234567)
    assert rng.uniform() == (6457827717110365317 >> 11) * 2.0**-53
    xs = [CounterRng(7).uniform() for _ in range(3)]
    assert len(set(xs)) == 1


def test_normals_moments():
    z = CounterRng(3).normals(20000)
    assert abs(z.mean()) < 0.03
    assert abs(z.std() - 1) < 0.03


def test_corpus_is_reproducible():
    a = plastic_corpus(11, 5)
    b = plastic_corpus(11, 5)
    for x, y in zip(a, b):
        assert x.params == y.params
        np.testing.assert_array_equal(x.d_eps, y.d_eps)
        np.testing.assert_array_equal(x.d_gradw, y.d_gradw)
        np.testing.assert_array_equal(x.state.sigma, y.state.sigma)
    c = plastic_corpus(12, 5)
    assert not np.array_equal(a[0].d_eps, c[0].d_eps)


def test_corpus_cases_are_plastic_and_start_admissible():
    for case in plastic_corpus(5, 20):
        p = effective_porosity(case.state.f, case.params)
        sbar, _ = case.params.hardening.evaluate(case.state.E)
        assert yield_function(case.state.sigma, case.state.moment, sbar, p, case.params) <= 1e-12
        trial = elastic_predictor(case.state, case.d_eps, case.d_gradw, case.params)
        assert yield_function(trial.sigma_star, trial.moment_star, sbar, p, case.params) > 1e-3


def test_corpus_switches():
    for case in plastic_corpus(6, 5, moments=False, porosity=False):
        assert np.all(case.d_gradw == 0)
        assert case.state.f == 0
