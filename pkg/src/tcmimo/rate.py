"""Achievable rate: whitened eigenmodes, water-filling and beamforming SNR.

The eigenvalue field ``lambda_r(f)`` of ``H^H R_n^-1 H`` is sampled on a
:class:`FrequencyGrid`; the frequency integral becomes a weighted sum with
composite-trapezoid weights. Power is allocated as generator voltage PSD
(V^2/Hz); :func:`voltage_budget` converts a budget in watts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolveError, ValidationError
from .network import ChannelRealization

PRECODING = ("optimum", "uniform")
ACTIVE_RTOL = 1e-10

BISECTION_ITERATIONS = 200
BISECTION_RTOL = 1e-12


def _trapezoid_weights(x):
    x = np.asarray(x, dtype=float)
    if x.size == 1:
        return np.ones(1)
    dx = np.diff(x)
    w = np.zeros_like(x)
    w[:-1] += dx / 2
    w[1:] += dx / 2
    return w


@dataclass(frozen=True)
class BandSet:
    """Non-overlapping ascending frequency bands ``(f_lo, f_hi)`` in Hz."""

    bands: tuple = ((680e6, 720e6), (2.45e9, 2.55e9), (24.9e9, 25.1e9))

    def __post_init__(self):
        bands = tuple((float(lo), float(hi)) for lo, hi in self.bands)
        if not bands:
            raise ValidationError("band set is empty")
        for lo, hi in bands:
            if not 0 < lo < hi:
                raise ValidationError(f"band ({lo}, {hi}) must satisfy 0 < f_lo < f_hi")
        for (_, hi), (lo, _) in zip(bands, bands[1:]):
            if lo < hi:
                raise ValidationError("bands must be ascending and non-overlapping")
        object.__setattr__(self, "bands", bands)

    def __iter__(self):
        return iter(self.bands)

    def __len__(self):
        return len(self.bands)

    def contains(self, f):
        """Boolean mask of frequencies lying in any band."""
        f = np.asarray(f, dtype=float)
        mask = np.zeros(f.shape, dtype=bool)
        for lo, hi in self.bands:
            mask |= (f >= lo) & (f <= hi)
        return mask

    @property
    def total_bandwidth(self):
        return sum(hi - lo for lo, hi in self.bands)


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """Quadrature nodes and weights over one or more frequency intervals.

    Attributes
    ----------
    points : ndarray
        Strictly increasing frequencies, Hz.
    weights : ndarray
        Positive quadrature weights, Hz; they sum to the covered bandwidth.
    log2_weights : ndarray
        Weights for integrating over ``log2(f)``, in octaves.
    """

    points: np.ndarray
    weights: np.ndarray
    log2_weights: np.ndarray | None = None

    def __post_init__(self):
        p = np.asarray(self.points, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if p.ndim != 1 or p.size == 0 or p.shape != w.shape:
            raise ValidationError("points and weights must be equal-length non-empty vectors")
        if np.any(np.diff(p) <= 0):
            raise ValidationError("grid points must be strictly increasing")
        if np.any(~(w > 0)):
            raise ValidationError("grid weights must be positive")
        object.__setattr__(self, "points", p)
        object.__setattr__(self, "weights", w)
        if self.log2_weights is None:
            object.__setattr__(self, "log2_weights", w / (p * np.log(2)))

    @classmethod
    def for_bands(cls, bands: BandSet | None = None, points_per_band=512):
        """Linear trapezoid grid with ``points_per_band`` nodes in each band."""
        bands = BandSet() if bands is None else bands
        if points_per_band < 2:
            raise ValueError("points_per_band must be >= 2")
        pts, wts, lw = [], [], []
        for lo, hi in bands:
            f = np.linspace(lo, hi, points_per_band)
            pts.append(f)
            wts.append(_trapezoid_weights(f))
            lw.append(_trapezoid_weights(np.log2(f)))
        return cls(np.concatenate(pts), np.concatenate(wts), np.concatenate(lw))

    @classmethod
    def span(cls, f_min=100e6, f_max=30e9, points=2048, log=True):
        """Single-interval trapezoid grid, log-spaced by default."""
        if not 0 < f_min < f_max:
            raise ValueError("need 0 < f_min < f_max")
        f = np.geomspace(f_min, f_max, points) if log else np.linspace(f_min, f_max, points)
        return cls(f, _trapezoid_weights(f), _trapezoid_weights(np.log2(f)))

    @property
    def size(self):
        return self.points.size

    @property
    def total_bandwidth(self):
        return float(self.weights.sum())

    def restrict(self, mask):
        """Sub-grid of the points selected by ``mask``, keeping their weights."""
        mask = np.asarray(mask, dtype=bool)
        return FrequencyGrid(self.points[mask], self.weights[mask], self.log2_weights[mask])


@dataclass(frozen=True, eq=False)
class RateResult:
    """Outcome of a power allocation.

    ``eigenvalues`` and ``powers`` have shape ``(F, R)``, aligned with
    ``frequencies``. ``water_level_nu`` is ``inf`` when nothing is allocated.
    """

    total_rate: float
    water_level_nu: float
    frequencies: np.ndarray
    eigenvalues: np.ndarray
    powers: np.ndarray
    weights: np.ndarray

    @property
    def per_point(self):
        return list(zip(self.frequencies, self.eigenvalues, self.powers))

    @property
    def total_power(self):
        return float((self.powers * self.weights[:, None]).sum())


def voltage_budget(p_max_watts, generator_R, convention="available"):
    """Convert a transmit budget in watts to a generator voltage-PSD budget.

    ``"available"``: ``4 R P``, the open-circuit voltage of a source of
    internal resistance ``R`` whose available power is ``P``.
    ``"resistive"``: ``R P``, the voltage across ``R`` dissipating ``P``.
    """
    if not p_max_watts > 0:
        raise ValueError("power budget must be > 0")
    if convention == "available":
        return 4.0 * generator_R * p_max_watts
    if convention == "resistive":
        return generator_R * p_max_watts
    raise ValueError(f"unknown power convention {convention!r}")


def whitened_eigenmodes(real: ChannelRealization):
    """Eigenvalues of ``H^H R_n^-1 H``, descending, shape ``(..., N)``.

    Computed as squared singular values of ``L^-1 H`` with ``R_n = L L^H``,
    which keeps them real and non-negative; the ``N - min(M, N)`` structural
    zeros are padded in.

    Raises
    ------
    SolveError
        ``R_n`` is not positive definite, so the noise cannot be whitened.
    """
    H = np.asarray(real.H)
    try:
        L = np.linalg.cholesky(np.asarray(real.R_n))
    except np.linalg.LinAlgError as exc:
        raise SolveError("noise covariance is singular; cannot whiten") from exc
    B = np.linalg.solve(L, H)
    s = np.linalg.svd(B, compute_uv=False)
    n = H.shape[-1]
    lam = np.zeros(H.shape[:-2] + (n,))
    lam[..., : s.shape[-1]] = s**2
    return lam


def _allocation(lam, inv_nu):
    out = np.zeros_like(lam)
    pos = lam > 0
    out[pos] = np.maximum(0.0, inv_nu - 1.0 / lam[pos])
    return out


def _allocated_power(lam, w, inv_nu):
    return float((_allocation(lam, inv_nu) * w[:, None]).sum())


def _polish(lam, w, p_max, inv_nu):
    """Exact allocation for the active set implied by the level ``inv_nu``.

    The level is written as ``s + excess`` with ``s`` the largest active
    ``1/lambda``, so that powers are formed from differences of comparable
    magnitudes instead of ``1/nu - 1/lambda`` with both terms huge.
    Iterates until the active set is self-consistent.
    """
    ww = np.broadcast_to(w[:, None], lam.shape)
    pos = lam > 0
    recip = np.full(lam.shape, np.inf)
    recip[pos] = 1.0 / lam[pos]
    active = recip < inv_nu
    if not active.any():
        active = lam == lam.max()
    for _ in range(lam.size + 1):
        s = recip[active].max()
        excess = (p_max + (ww[active] * (recip[active] - s)).sum()) / ww[active].sum()
        gap = np.where(pos, s - recip, -np.inf)
        candidate = pos & (excess + gap > 0)
        if np.array_equal(candidate, active) or not candidate.any():
            break
        active = candidate
    powers = np.where(active, excess + gap, 0.0)
    return powers, s + excess


def waterfill(eigenvalues, weights, p_max) -> RateResult:
    """Water-filling over an eigenvalue field.

    Parameters
    ----------
    eigenvalues : array (F, R)
        Non-negative ``lambda_r(f)`` per grid point.
    weights : array (F,)
        Quadrature weights of the grid points.
    p_max : float
        Budget for ``sum_f w(f) sum_r P_r(f)``.

    Returns
    -------
    RateResult
        ``P_r(f) = max(0, 1/nu - 1/lambda_r(f))`` with ``nu`` meeting the
        budget, and rate ``sum_f w(f) sum_r log2(1 + P_r lambda_r)``.

    Notes
    -----
    ``nu`` is bracketed in ``[1e-18 lambda_max, lambda_max]`` and bisected
    geometrically; the bracket is widened if the budget is not reached. The
    bisection result fixes the active set, from which ``nu`` is then solved
    exactly. Subnormal eigenvalues are treated as zero.
    """
    lam = np.atleast_2d(np.asarray(eigenvalues, dtype=float))
    w = np.asarray(weights, dtype=float).reshape(-1)
    if lam.shape[0] != w.size:
        raise ValueError("eigenvalue rows must match the number of weights")
    if not p_max > 0:
        raise ValueError("p_max must be > 0")
    if np.any(lam < 0):
        raise ValueError("eigenvalues must be non-negative")
    # subnormal eigenvalues would overflow 1/lambda; they carry no rate
    lam = np.where(lam < np.finfo(float).tiny, 0.0, lam)
    lam_max = lam.max() if lam.size else 0.0
    if not lam_max > 0:
        return RateResult(0.0, np.inf, np.arange(w.size), lam, np.zeros_like(lam), w)

    nu_hi = lam_max
    nu_lo = lam_max * 1e-18
    while _allocated_power(lam, w, 1.0 / nu_lo) < p_max:
        nu_lo *= 1e-6
    for _ in range(BISECTION_ITERATIONS):
        mid = np.sqrt(nu_hi * nu_lo)
        total = _allocated_power(lam, w, 1.0 / mid)
        if total > p_max:
            nu_lo = mid
        else:
            nu_hi = mid
        if abs(total - p_max) <= BISECTION_RTOL * p_max or nu_hi / nu_lo - 1 < 1e-15:
            break
    powers, inv_nu = _polish(lam, w, p_max, 1.0 / np.sqrt(nu_hi * nu_lo))
    rate = float((w[:, None] * np.log2(1.0 + powers * lam)).sum())
    return RateResult(rate, 1.0 / inv_nu, np.arange(w.size), lam, powers, w)


def uniform_allocation(eigenvalues, weights, p_max) -> RateResult:
    """Spread ``p_max`` evenly over the active modes and all grid points.

    A mode is active when it exceeds ``1e-10`` of the field maximum at some
    frequency.
    """
    lam = np.atleast_2d(np.asarray(eigenvalues, dtype=float))
    w = np.asarray(weights, dtype=float).reshape(-1)
    lam_max = lam.max() if lam.size else 0.0
    if not lam_max > 0:
        return RateResult(0.0, np.inf, np.arange(w.size), lam, np.zeros_like(lam), w)
    active = np.any(lam > ACTIVE_RTOL * lam_max, axis=0)
    level = p_max / (active.sum() * w.sum())
    powers = np.where(active[None, :], level, 0.0) * np.ones_like(lam)
    rate = float((w[:, None] * np.log2(1.0 + powers * lam)).sum())
    return RateResult(rate, np.nan, np.arange(w.size), lam, powers, w)


def achievable_rate(eigenvalues, grid: FrequencyGrid, power_budget, precoding="optimum", bands: BandSet | None = None):
    """Rate of an eigenvalue field sampled on ``grid``.

    Parameters
    ----------
    eigenvalues : array (F, R)
        Whitened eigenvalues at ``grid.points``.
    power_budget : float
        Generator voltage-PSD budget, see :func:`voltage_budget`.
    precoding : {"optimum", "uniform"}
    bands : BandSet, optional
        Restrict the integral to grid points inside these bands.
    """
    lam = np.atleast_2d(np.asarray(eigenvalues, dtype=float))
    if lam.shape[0] != grid.size:
        raise ValueError("eigenvalue field does not match the grid")
    precoding = str(precoding).lower()
    if precoding not in PRECODING:
        raise ValueError(f"precoding must be one of {PRECODING}")
    freqs, weights = grid.points, grid.weights
    if bands is not None:
        mask = bands.contains(grid.points)
        if not mask.any():
            raise ValidationError("no grid point lies inside the bands")
        lam, freqs, weights = lam[mask], freqs[mask], weights[mask]
    alloc = waterfill if precoding == "optimum" else uniform_allocation
    res = alloc(lam, weights, power_budget)
    return RateResult(res.total_rate, res.water_level_nu, freqs, res.eigenvalues, res.powers, res.weights)


def beamforming_snr(source, power_density):
    """SNR with optimum beamforming: ``power_density * lambda_max``.

    ``source`` is a :class:`ChannelRealization` or a precomputed
    eigenvalue array with the mode axis last.
    """
    lam = whitened_eigenmodes(source) if isinstance(source, ChannelRealization) else np.asarray(source)
    return power_density * lam[..., 0] if lam.shape[-1] else np.zeros(lam.shape[:-1])


def operational_bandwidth(snr, grid: FrequencyGrid, drop_db=3.0, measure="hz"):
    """Measure of the grid where ``snr >= peak / 10^(drop_db/10)``.

    ``measure="hz"`` sums the linear quadrature weights; ``"octaves"`` sums
    the ``log2(f)`` weights, a scale-free width for curves spanning decades.
    """
    snr = np.asarray(snr, dtype=float)
    if snr.size == 0:
        raise ValueError("empty SNR curve")
    if snr.shape != grid.points.shape:
        raise ValueError("SNR curve does not match the grid")
    keep = snr >= snr.max() / 10 ** (drop_db / 10)
    if measure == "hz":
        return float(grid.weights[keep].sum())
    if measure == "octaves":
        return float(grid.log2_weights[keep].sum())
    raise ValueError(f"unknown measure {measure!r}")
