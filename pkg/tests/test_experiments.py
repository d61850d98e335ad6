import numpy as np
import pytest

from tcmimo import experiments as ex
from tcmimo.invariants import check_frequencies, check_scenario
from tcmimo.rate import FrequencyGrid
from tcmimo.scenario import Scenario

SMALL = Scenario().replace(grid_span_points=48, grid_band_points=16, monte_carlo_draws=3)


def test_map_ordered_keeps_order():
    items = list(range(20))
    assert ex.map_ordered(lambda x: x * x, items, threads=4) == [x * x for x in items]


def test_miso_receiver_radius():
    tx, rx = ex.miso_pair(SMALL, 8, "parallel")
    assert tx.count == 8 and rx.count == 1
    assert rx.element.radius_a == pytest.approx(100 * SMALL.rx_spacing)
    assert str(tx.orientation) == str(rx.orientation) == "parallel"


def test_larger_array_has_higher_peak_snr():
    peaks = [ex.snr_curve(SMALL, n, "colinear")[1].max() for n in (1, 8)]
    assert peaks[1] >= peaks[0]


def test_decoupled_array_gain_is_coherent():
    # identical rank-1 paths combine coherently: peak SNR grows as N
    one = ex.snr_curve(SMALL, 1, coupled=False)[1].max()
    four = ex.snr_curve(SMALL, 4, coupled=False)[1].max()
    assert four / one == pytest.approx(4, rel=1e-6)


def test_link_rate_shape_and_power_monotone():
    scn = SMALL.replace(channel="rayleigh")
    tx, rx = scn.tx, scn.rx
    rates = ex.link_rate(scn, tx, rx, power_scales=(1.0, 10.0, 100.0), draws=2)
    assert rates.shape == (2, 3)
    assert np.all(np.diff(rates, axis=1) > 0)


def square_link_rates(power_scale, draws=10):
    scn = Scenario().replace(grid_band_points=64)
    scales = (power_scale,)
    los = ex.link_rate(scn, scn.tx, scn.rx, power_scales=scales).mean()
    ray = ex.link_rate(scn.replace(channel="rayleigh"), scn.tx, scn.rx, power_scales=scales, draws=draws).mean()
    return los, ray


def test_rayleigh_beats_los_for_square_mimo_at_defaults():
    # N = M = 16 coupled colinear, optimum precoding, default budget.
    # Known red: the endfire LoS beam gains more from tight coupling than
    # the fading channel at this SNR (see the decisions ledger).
    los, ray = square_link_rates(1.0)
    assert ray > los


def test_rayleigh_beats_los_for_square_mimo_at_higher_snr():
    los, ray = square_link_rates(10.0)
    assert ray > los


def test_decoupled_heatmap_rate_grows_with_min_dimension():
    scn = SMALL.replace(channel="rayleigh", coupled=False)
    grid = FrequencyGrid.for_bands(scn.band_set, 8)
    h = ex.heatmap(scn, (2, 4), (2, 4), grid=grid, power_scales=(1.0,), draws=3)
    assert h[(4, 4)][0] > h[(2, 2)][0]
    assert h[(4, 4)][0] > h[(4, 2)][0]


def test_rate_vs_ratio_threads_agree():
    ratios = (1.5, 2.0, 3.0)
    grid = FrequencyGrid.for_bands(SMALL.band_set, 8)
    a = ex.rate_vs_ratio(SMALL, ratios, (2, 4), grid=grid, threads=1)
    b = ex.rate_vs_ratio(SMALL, ratios, (2, 4), grid=grid, threads=3)
    for n in (2, 4):
        assert np.array_equal(a[n], b[n])


def test_check_frequencies_include_band_centres():
    f = check_frequencies(SMALL, 8)
    for lo, hi in SMALL.bands:
        assert np.any(np.isclose(f, 0.5 * (lo + hi)))


@pytest.mark.parametrize("overrides", [{}, {"tx_orientation": "parallel", "rx_count": 3}, {"tx_count": 1, "mode": "NF"}])
def test_check_scenario_passes(overrides):
    checks = check_scenario(SMALL.replace(**overrides), points=6)
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]
