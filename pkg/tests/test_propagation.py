import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tcmimo.chu import ChuElement, self_impedance_parts
from tcmimo.coupling import ArrayGeometry, ImpedanceMatrix, array_impedance
from tcmimo.errors import NotPSDError, ValidationError
from tcmimo.propagation import (
    FadingDraw,
    LinkConfig,
    los_transimpedance,
    psd_matrix_sqrt,
    rayleigh_transimpedance,
    steering_vector,
)

from conftest import C0


def test_steering_broadside():
    np.testing.assert_allclose(steering_vector(3, 0.01, math.pi / 2, 1e9), np.ones(3), atol=1e-15)


def test_steering_quarter_wave():
    f = 1e9
    spacing = C0 / (4 * f)
    np.testing.assert_allclose(steering_vector(3, spacing, 0.0, f), [1, -1j, -1], atol=1e-15)


@given(st.integers(1, 64), st.floats(1e-4, 1.0), st.floats(-7, 7), st.floats(1e6, 1e11))
def test_steering_unit_modulus(n, spacing, theta, f):
    a = steering_vector(n, spacing, theta, f)
    np.testing.assert_allclose(np.abs(a), 1.0, atol=1e-12)


def test_steering_sin_convention():
    np.testing.assert_allclose(steering_vector(4, 0.02, 0.0, 2e9, "sin"), np.ones(4))


def siso_reference(aT, aR, f, d, alpha, R=50.0, G=1.5):
    # element form: |Z_RT| from Friis with radiation resistances, phase from
    # the two current dividers j k a / (1 + j k a)
    k = 2 * math.pi * f / C0
    reT = R * (k * aT) ** 2 / (1 + (k * aT) ** 2)
    reR = R * (k * aR) ** 2 / (1 + (k * aR) ** 2)
    mag = C0 * G / (2 * math.pi * f * d ** (alpha / 2)) * math.sqrt(reT * reR)
    divT = 1j * k * aT / (1 + 1j * k * aT)
    divR = 1j * k * aR / (1 + 1j * k * aR)
    phase = (divT * divR) / abs(divT * divR)
    return mag * phase


def test_siso_matches_element_form(rng):
    for _ in range(5):
        f = rng.uniform(1e8, 3e10)
        d = rng.uniform(10, 200)
        aT, aR = rng.uniform(1e-3, 1e-2, 2)
        tx = ArrayGeometry(1, 0.01, element=ChuElement(aT))
        rx = ArrayGeometry(1, 0.01, element=ChuElement(aR))
        link = LinkConfig(d)
        z = los_transimpedance(array_impedance(tx, f), array_impedance(rx, f), tx, rx, link, f)
        assert z.shape == (1, 1)
        assert z[0, 0] == pytest.approx(siso_reference(aT, aR, f, d, 3.5), rel=1e-12)


def _los(n, m, f, d=50.0, coupled=True):
    tx = ArrayGeometry(n, 0.005)
    rx = ArrayGeometry(m, 0.005)
    return los_transimpedance(array_impedance(tx, f, coupled), array_impedance(rx, f, coupled), tx, rx, LinkConfig(d), f)


@given(st.integers(1, 16), st.integers(1, 16), st.floats(1e8, 3e10))
def test_los_rank_one(n, m, f):
    s = np.linalg.svd(_los(n, m, f), compute_uv=False)
    assert len(s) == 1 or s[1] < 1e-10 * s[0]


def test_los_distance_scaling():
    f = 2.5e9
    ratio = np.abs(_los(4, 3, f, d=80.0)) / np.abs(_los(4, 3, f, d=40.0))
    np.testing.assert_allclose(ratio, 2 ** -1.75, rtol=1e-13)


def test_los_stacked_matches_pointwise():
    f = np.array([7e8, 2.5e9, 2.5e10])
    stacked = _los(3, 2, f)
    for i, fi in enumerate(f):
        np.testing.assert_allclose(stacked[i], _los(3, 2, fi), rtol=1e-14)


@given(st.floats(1e6, 1e12), st.floats(1e-4, 1.0), st.floats(1e-4, 1.0))
def test_phase_in_open_interval(f, aT, aR):
    k = 2 * math.pi * f / C0
    phi = math.pi - math.atan(k * aT) - math.atan(k * aR)
    assert 0 < phi < math.pi


def test_los_rejects_bad_diagonal():
    tx = ArrayGeometry(2, 0.005)
    bad = ImpedanceMatrix(1e9, np.array([[-1 + 0j, 0], [0, 1]]))
    with pytest.raises(ValidationError):
        los_transimpedance(bad, bad, tx, tx, LinkConfig(10.0), 1e9)


@pytest.mark.parametrize("kwargs", [dict(distance_d=0), dict(distance_d=1, pathloss_alpha=0), dict(distance_d=1, angle_convention="tan")])
def test_link_validation(kwargs):
    with pytest.raises(ValueError):
        LinkConfig(**kwargs)


def test_psd_sqrt_examples():
    np.testing.assert_allclose(psd_matrix_sqrt(np.eye(3)), np.eye(3), atol=1e-15)
    np.testing.assert_allclose(psd_matrix_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-14)


def test_psd_sqrt_roundtrip(rng):
    a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    m = a @ a.conj().T
    s = psd_matrix_sqrt(m)
    assert np.linalg.norm(s @ s - m) <= 1e-8 * np.linalg.norm(m)


def test_psd_sqrt_clamps_roundoff():
    m = np.diag([1.0, -1e-12])
    np.testing.assert_allclose(psd_matrix_sqrt(m), np.diag([1.0, 0.0]))


def test_psd_sqrt_errors():
    with pytest.raises(NotPSDError):
        psd_matrix_sqrt(np.diag([1.0, -0.1]))
    with pytest.raises(ValidationError):
        psd_matrix_sqrt(np.array([[1.0, 0.5], [0.0, 1.0]]))


def test_coupled_real_part_is_psd_over_span():
    g = ArrayGeometry(16, 0.005)
    z = array_impedance(g, np.geomspace(1e8, 3e10, 64))
    psd_matrix_sqrt(z.real)


def test_fading_reproducible():
    a = FadingDraw.generate(7, 3, 4, draw_index=2)
    b = FadingDraw.generate(7, 3, 4, draw_index=2)
    np.testing.assert_array_equal(a.matrix_F, b.matrix_F)
    assert not np.array_equal(a.matrix_F, FadingDraw.generate(7, 3, 4, draw_index=3).matrix_F)
    assert not np.array_equal(a.matrix_F, FadingDraw.generate(8, 3, 4, draw_index=2).matrix_F)


def test_fading_statistics():
    F = FadingDraw.generate(1, 200, 200).matrix_F
    assert F.real.var() == pytest.approx(0.5, rel=0.03)
    assert F.imag.var() == pytest.approx(0.5, rel=0.03)
    assert abs(F.mean()) < 0.01


def test_rayleigh_identity_correlation():
    eye = ImpedanceMatrix(1e9, np.eye(3) + 0j)
    draw = FadingDraw.generate(3, 3, 3)
    link = LinkConfig(30.0)
    z = rayleigh_transimpedance(eye, eye, link, draw, 1e9)
    np.testing.assert_allclose(z, link.path_amplitude(1e9) * draw.matrix_F, rtol=1e-14)


def test_rayleigh_shape_check():
    eye = ImpedanceMatrix(1e9, np.eye(2) + 0j)
    with pytest.raises(ValueError):
        rayleigh_transimpedance(eye, eye, LinkConfig(1.0), FadingDraw.generate(0, 3, 2), 1e9)


def test_rayleigh_second_moment_and_correlation():
    f = 2.5e9
    tx = ArrayGeometry(3, 0.005)
    rx = ArrayGeometry(4, 0.005)
    zT, zR = array_impedance(tx, f), array_impedance(rx, f)
    link = LinkConfig(40.0)
    rootT, rootR = psd_matrix_sqrt(zT.real), psd_matrix_sqrt(zR.real)
    draws = np.array(
        [
            rayleigh_transimpedance(zT, zR, link, FadingDraw.generate(11, 4, 3, k), f, roots=(rootT, rootR))
            for k in range(10000)
        ]
    )
    scale = link.path_amplitude(f) ** 2
    power = np.mean(np.abs(draws) ** 2, axis=0)
    expected = scale * np.outer(np.diag(zR.real), np.diag(zT.real))
    np.testing.assert_allclose(power, expected, rtol=0.05)
    # receive-side covariance of each column ~ Re{Z_R} * Re{Z_T}[n, n]
    cov = np.einsum("kmn,kpn->mp", draws, draws.conj()) / len(draws)
    np.testing.assert_allclose(cov, scale * zR.real * np.trace(zT.real), rtol=0.05, atol=0.05 * np.abs(cov).max())
