"""Reactance cancellation in tightly coupled colinear Chu arrays.

Under uniform excitation the reactance seen by one element of a colinear
array is its own Chu reactance plus the imaginary parts of all its mutual
impedances. Normalized by ``R``, with ``x = k0 delta`` and
``ka = x / ratio``::

    residual = -1 / (ka (1 + ka^2)) + 3 ka^2 / (1 + ka^2) * S(x)

    S(x) = 2 sum_l [ cos(l x) / (l x)^3 + sin(l x) / (l x)^2 ]

The sum runs over ``l = 1 .. N-1`` for a finite array and to infinity in
the quasi-continuous limit, where it has a closed form in ``Li_2`` and
``Li_3`` of ``exp(+-j x)``. As ``x -> 0`` the zero crossing tends to
``ratio = (6 zeta(3))^(1/3)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect

from .coupling import RATIO_FLOOR
from .special import polylog, tight_coupling_ratio, zeta3

__all__ = [
    "INFINITE",
    "RATIO_CEILING",
    "QUASI_CONTINUOUS_K0_DELTA",
    "TightCouplingReport",
    "asymptotic_ratio",
    "colinear_lattice_sum",
    "colinear_reactance_residual",
    "optimum_ratio_sweep",
    "polylog",
    "tight_coupling_report",
    "tight_coupling_root",
    "zeta3",
]

INFINITE = math.inf
RATIO_CEILING = 4.0
QUASI_CONTINUOUS_K0_DELTA = 1e-6
SCAN_POINTS = 64

_CHUNK = 1 << 18


def asymptotic_ratio():
    """``(6 zeta(3))^(1/3)``, the optimum spacing-to-radius ratio of an
    infinite colinear array in the quasi-continuous limit."""
    return tight_coupling_ratio()


def _check_count(count):
    if count == INFINITE:
        return INFINITE
    if int(count) != count or count < 1:
        raise ValueError(f"count must be a positive integer or INFINITE, got {count!r}")
    return int(count)


def _partial_lattice_sum(x, terms):
    # 2 sum_{l=1}^{terms} [cos(lx)/(lx)^3 + sin(lx)/(lx)^2], chunked to bound memory
    total = 0.0
    for start in range(1, terms + 1, _CHUNK):
        y = x * np.arange(start, min(start + _CHUNK, terms + 1), dtype=float)
        total += float(np.sum(np.cos(y) / y**3 + np.sin(y) / y**2))
    return 2.0 * total


def _closed_lattice_sum(x):
    z = complex(math.cos(x), math.sin(x))
    zc = z.conjugate()
    cos_part = (polylog(3, z) + polylog(3, zc)).real / x**3
    sin_part = (1j * (polylog(2, zc) - polylog(2, z))).real / x**2
    return cos_part + sin_part


def colinear_lattice_sum(k0_delta, count=INFINITE):
    """``S(x)``: normalized reactive mutual-coupling sum seen by one element.

    Finite ``count`` sums lags ``1 .. count-1`` on both sides; ``INFINITE``
    uses the polylogarithm closed form.
    """
    x = float(k0_delta)
    if not x > 0:
        raise ValueError("k0_delta must be > 0")
    count = _check_count(count)
    if count == INFINITE:
        return _closed_lattice_sum(x)
    return _partial_lattice_sum(x, count - 1)


def colinear_reactance_residual(ratio, k0_delta, count=INFINITE):
    """Total reactance of a uniformly excited colinear array, per unit ``R``.

    Parameters
    ----------
    ratio : float
        Spacing-to-radius ratio ``delta / a`` (> 0).
    k0_delta : float
        Electrical spacing ``2 pi f delta / c`` (> 0).
    count : int or INFINITE
        Number of elements.

    Returns
    -------
    float
        ``Im{Z_self}/R + sum Im{Z_mutual}/R``; zero at tight coupling.
    """
    if not ratio > 0:
        raise ValueError("ratio must be > 0")
    ka = float(k0_delta) / float(ratio)
    s = colinear_lattice_sum(k0_delta, count)
    return -1.0 / (ka * (1 + ka**2)) + 3 * ka**2 / (1 + ka**2) * s


def tight_coupling_root(k0_delta=QUASI_CONTINUOUS_K0_DELTA, count=INFINITE, lo=RATIO_FLOOR, hi=RATIO_CEILING):
    """Ratio in ``[lo, hi]`` at which the residual vanishes, or ``None``.

    A 64-point scan brackets the first sign change and bisection refines
    it. Returns ``None`` when the residual keeps one sign over the interval
    (a single element, or arrays too short to cancel their reactance).
    """
    s = colinear_lattice_sum(k0_delta, count)

    def g(r):
        ka = k0_delta / r
        return -1.0 / (ka * (1 + ka**2)) + 3 * ka**2 / (1 + ka**2) * s

    grid = np.linspace(lo, hi, SCAN_POINTS)
    vals = np.array([g(r) for r in grid])
    for i in range(SCAN_POINTS - 1):
        if vals[i] == 0:
            return float(grid[i])
        if np.sign(vals[i]) != np.sign(vals[i + 1]):
            return float(bisect(g, grid[i], grid[i + 1], xtol=1e-14, rtol=4 * np.finfo(float).eps))
    return None


@dataclass(frozen=True)
class TightCouplingReport:
    """Analytical and numerical optima of the spacing-to-radius ratio.

    ``finite_N_root`` and ``sweep_optimum`` map array size to ratio.
    Roots below 2 describe overlapping Chu spheres, where the coupling
    model is approximate; ``approximate`` records that.
    """

    asymptotic_ratio: float
    k0_delta: float
    finite_N_root: dict = field(default_factory=dict)
    sweep_optimum: dict = field(default_factory=dict)

    @property
    def approximate(self):
        return self.asymptotic_ratio < 2.0


def tight_coupling_report(counts=(), k0_delta=QUASI_CONTINUOUS_K0_DELTA, sweep_optimum=None):
    """Asymptotic ratio plus finite-array roots for each size in ``counts``."""
    roots = {int(n): tight_coupling_root(k0_delta, n) for n in counts}
    return TightCouplingReport(asymptotic_ratio(), k0_delta, roots, dict(sweep_optimum or {}))


def optimum_ratio_sweep(scenario, ratios, counts, orientation=None, threads=1):
    """Rate-maximizing ratio for each transmit array size.

    Evaluates the achievable rate at fixed spacing over ``ratios`` (radius
    ``delta / ratio``) for each ``N`` in ``counts`` and returns
    ``({N: argmax ratio}, {N: rate array})``.
    """
    from .experiments import rate_vs_ratio

    ratios = np.asarray(ratios, dtype=float)
    if ratios.size == 0 or len(counts) == 0:
        raise ValueError("ratio and count lists must be non-empty")
    if ratios.min() < RATIO_FLOOR * (1 - 1e-12) or ratios.max() > RATIO_CEILING * (1 + 1e-12):
        raise ValueError(f"ratios must lie in [{RATIO_FLOOR:.6g}, {RATIO_CEILING:g}]")
    curves = rate_vs_ratio(scenario, ratios, counts, orientation=orientation, threads=threads)
    best = {n: float(ratios[int(np.argmax(curves[n]))]) for n in counts}
    return best, curves
