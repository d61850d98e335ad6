import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tcmimo.chu import ChuElement, ladder_impedance, self_impedance, self_impedance_parts

from conftest import freq_for_ka


def at_ka(ka, R=50.0, radius=0.01):
    return ChuElement(radius, R), freq_for_ka(ka, radius)


def test_symmetric_point():
    e, f = at_ka(1.0)
    z = self_impedance(e, f)
    assert z.real == pytest.approx(25.0, rel=1e-14)
    assert z.imag == pytest.approx(-25.0, rel=1e-14)
    assert self_impedance_parts(e, f) == pytest.approx((25.0, -25.0), rel=1e-14)


def test_high_frequency_limit():
    e, f = at_ka(1e6)
    re, im = self_impedance_parts(e, f)
    assert re == pytest.approx(50.0, rel=1e-9)
    assert abs(im) < 1e-9


def test_substitution_half():
    # Re = 50*0.25/1.25, Im = -50/(0.5*1.25)
    e, f = at_ka(0.5)
    assert self_impedance_parts(e, f) == pytest.approx((10.0, -80.0), rel=1e-13)


def test_substitution_two():
    e, f = at_ka(2.0)
    assert self_impedance_parts(e, f) == pytest.approx((40.0, -5.0), rel=1e-13)


def test_zero_resistance_limit():
    # R = 0 is rejected as an element; the parts scale linearly in R and vanish with it
    for R in (1e-3, 1e-6, 1e-9):
        e, f = at_ka(1.0, R=R)
        re, im = self_impedance_parts(e, f)
        assert abs(re) <= R and abs(im) <= R


@pytest.mark.parametrize("bad", [0.0, -1.0, np.nan])
def test_rejects_nonpositive_frequency(bad):
    with pytest.raises(ValueError):
        self_impedance(ChuElement(0.01), bad)


@pytest.mark.parametrize("kwargs", [dict(radius_a=0.0), dict(radius_a=0.01, resistance_R=0.0)])
def test_rejects_invalid_element(kwargs):
    with pytest.raises(ValueError):
        ChuElement(**kwargs)


def test_matches_ladder_circuit():
    e = ChuElement(0.003, 73.0)
    f = np.geomspace(1e7, 1e11, 200)
    np.testing.assert_allclose(self_impedance(e, f), ladder_impedance(e, f), rtol=1e-12)


@given(st.floats(1e-3, 1e3), st.floats(1.0, 500.0))
def test_bounds(ka, R):
    e, f = at_ka(ka, R)
    re, im = self_impedance_parts(e, f)
    assert 0 < re < R
    assert im < 0


@given(st.floats(1e-3, 1e2))
def test_parts_match_complex_exactly(ka):
    e, f = at_ka(ka)
    re, im = self_impedance_parts(e, f)
    z = self_impedance(e, f)
    assert z == complex(re, im)


def test_monotone_on_grid():
    e = ChuElement(0.005)
    f = np.geomspace(1e6, 1e12, 500)
    re, im = self_impedance_parts(e, f)
    assert np.all(np.diff(re) > 0)
    assert np.all(np.diff(np.abs(im)) < 0)
