"""Numerical experiments on a Scenario: SNR sweeps, rate curves, heatmaps.

Every experiment evaluates the whole frequency grid at once with stacked
matrices. Independent sweep points can be spread over a thread pool;
results always come back in axis order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .coupling import ArrayGeometry, Orientation, array_impedance
from .network import MultiportBlocks, realize
from .propagation import FadingDraw, los_transimpedance, psd_matrix_sqrt, rayleigh_transimpedance
from .rate import achievable_rate, beamforming_snr, whitened_eigenmodes


def map_ordered(func, items, threads=1):
    """``[func(x) for x in items]``, optionally on a thread pool."""
    items = list(items)
    if threads is None or threads <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


class LinkModel:
    """Impedances of a transmit/receive pair on a grid, reusable across draws."""

    def __init__(self, scenario, tx: ArrayGeometry, rx: ArrayGeometry, f, coupled=None):
        self.scenario = scenario
        self.tx, self.rx = tx, rx
        self.f = np.asarray(f, dtype=float)
        coupled = scenario.coupled if coupled is None else coupled
        self.tx_Z = array_impedance(tx, self.f, coupled)
        self.rx_Z = array_impedance(rx, self.f, coupled)
        self._roots = None

    def _solve(self, Z_RT):
        blocks = MultiportBlocks(self.f, self.tx_Z.entries, self.rx_Z.entries, Z_RT)
        return realize(blocks, self.scenario.fe, self.scenario.mode)

    def los(self):
        return self._solve(los_transimpedance(self.tx_Z, self.rx_Z, self.tx, self.rx, self.scenario.link, self.f))

    def rayleigh(self, draw_index):
        if self._roots is None:
            self._roots = psd_matrix_sqrt(self.tx_Z.real), psd_matrix_sqrt(self.rx_Z.real)
        draw = FadingDraw.generate(self.scenario.seed, self.rx.count, self.tx.count, draw_index)
        Z_RT = rayleigh_transimpedance(self.tx_Z, self.rx_Z, self.scenario.link, draw, self.f, roots=self._roots)
        return self._solve(Z_RT)

    def eigenvalue_fields(self, draws=None):
        """Whitened eigenvalues ``(F, N)``: one field for LoS, one per draw for Rayleigh."""
        if self.scenario.channel == "los":
            return [whitened_eigenmodes(self.los())]
        count = self.scenario.monte_carlo_draws if draws is None else draws
        return [whitened_eigenmodes(self.rayleigh(k)) for k in range(count)]


def _orientation_name(orientation, default):
    return str(Orientation.parse(orientation)) if orientation is not None else default


def miso_pair(scenario, count, orientation=None, ratio=None):
    """``count``-element transmit array facing one large receive element."""
    orient = _orientation_name(orientation, scenario.tx_orientation)
    tx = scenario.make_array(count, scenario.tx_spacing, scenario.tx_ratio if ratio is None else ratio, orient)
    return tx, scenario.miso_receiver(orient)


def snr_curve(scenario, count, orientation=None, coupled=None, grid=None):
    """Beamforming SNR over the span grid for a MISO link.

    Returns ``(grid, snr)`` with ``snr`` linear. The transmit density is
    the flat :attr:`Scenario.power_density`; always uses line of sight.
    """
    grid = scenario.span_grid() if grid is None else grid
    tx, rx = miso_pair(scenario, count, orientation)
    model = LinkModel(scenario, tx, rx, grid.points, coupled)
    lam = whitened_eigenmodes(model.los())
    return grid, beamforming_snr(lam, scenario.power_density)


def link_rate(scenario, tx, rx, grid=None, power_scales=(1.0,), draws=None, coupled=None, precoding=None):
    """Achievable rate over the band grid.

    Returns an array ``(fields, len(power_scales))``: one row for LoS, one
    per fading draw for Rayleigh.
    """
    grid = scenario.band_grid() if grid is None else grid
    precoding = scenario.precoding if precoding is None else precoding
    model = LinkModel(scenario, tx, rx, grid.points, coupled)
    out = []
    for lam in model.eigenvalue_fields(draws):
        out.append(
            [achievable_rate(lam, grid, s * scenario.power_budget, precoding).total_rate for s in power_scales]
        )
    return np.array(out)


def rate_vs_ratio(scenario, ratios, counts, orientation=None, threads=1, grid=None):
    """MISO rate for each transmit size and spacing-to-radius ratio.

    Spacing is held fixed and the radius set to ``spacing / ratio``.
    Returns ``{N: rates}`` with rates averaged over fading draws.
    """
    grid = scenario.band_grid() if grid is None else grid
    points = [(n, r) for n in counts for r in ratios]

    def one(point):
        n, r = point
        tx, rx = miso_pair(scenario, n, orientation, r)
        return float(link_rate(scenario, tx, rx, grid).mean())

    values = map_ordered(one, points, threads)
    k = len(ratios)
    return {n: np.array(values[i * k : (i + 1) * k]) for i, n in enumerate(counts)}


def heatmap(scenario, tx_counts, rx_counts, threads=1, grid=None, power_scales=(1.0,), draws=None):
    """Mean MIMO rate per ``(N, M)``; returns ``{(N, M): rates per power scale}``."""
    grid = scenario.band_grid() if grid is None else grid
    points = [(n, m) for n in tx_counts for m in rx_counts]

    def one(point):
        n, m = point
        tx = scenario.make_array(n, scenario.tx_spacing, scenario.tx_ratio, scenario.tx_orientation)
        rx = scenario.make_array(m, scenario.rx_spacing, scenario.rx_ratio, scenario.rx_orientation)
        return link_rate(scenario, tx, rx, grid, power_scales, draws).mean(axis=0)

    return dict(zip(points, map_ordered(one, points, threads)))
