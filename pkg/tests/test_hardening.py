import pytest

from glpd.hardening import HardeningCurve, hardening_stress


def test_perfect():
    assert hardening_stress(0.3, HardeningCurve.perfect(450.0)) == (450.0, 0.0)


def test_table_interpolation():
    curve = HardeningCurve.table([(0.0, 450.0), (0.1, 550.0)])
    sbar, h = hardening_stress(0.05, curve)
    assert sbar == pytest.approx(500.0)
    assert h == pytest.approx(1000.0)


def test_table_right_slope_at_knot_and_flat_extrapolation():
    curve = HardeningCurve.table([(0.0, 450.0), (0.1, 550.0), (0.2, 560.0)])
    assert hardening_stress(0.1, curve)[1] == pytest.approx(100.0)
    assert hardening_stress(0.5, curve) == (560.0, 0.0)
    assert curve.beyond_table(0.5) and not curve.beyond_table(0.15)


def test_power_law_slope():
    curve = HardeningCurve.power_law(450.0, 0.01, 0.1)
    sbar, h = hardening_stress(0.0, curve)
    assert sbar == 450.0
    assert h == pytest.approx(4500.0)
    e, d = 0.02, 1e-7
    fd = (hardening_stress(e + d, curve)[0] - hardening_stress(e - d, curve)[0]) / (2 * d)
    assert hardening_stress(e, curve)[1] == pytest.approx(fd, rel=1e-7)


@pytest.mark.parametrize(
    "pairs",
    [[(0.1, 450.0)], [(0.0, 450.0), (0.0, 460.0)], [(0.0, 450.0), (0.1, 440.0)], [(0.0, -1.0)]],
)
def test_invalid_tables(pairs):
    with pytest.raises(ValueError):
        HardeningCurve.table(pairs)


def test_negative_strain_rejected():
    with pytest.raises(ValueError):
        hardening_stress(-1e-3, HardeningCurve.perfect(450.0))
