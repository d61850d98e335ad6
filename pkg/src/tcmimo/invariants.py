"""Structural checks of a scenario's matrices, used by ``tcmimo validate``.

Each check returns a :class:`Check` instead of raising, so a full report
can be printed even when several checks fail.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coupling import array_impedance
from .errors import InternalConsistencyError
from .experiments import LinkModel
from .network import MultiportBlocks, realize
from .propagation import steering_vector

RANK_RTOL = 1e-10
PSD_RTOL = 1e-10


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


def check_frequencies(scenario, points=16):
    """Log-spaced sample of the span plus the band centres."""
    span = np.geomspace(scenario.grid_f_min, scenario.grid_f_max, points)
    centres = [0.5 * (lo + hi) for lo, hi in scenario.bands]
    return np.unique(np.concatenate([span, centres]))


def _impedance_checks(scenario, f):
    out = []
    for side, geom in (("tx", scenario.tx), ("rx", scenario.rx)):
        z = array_impedance(geom, f, coupled=True)
        ok = z.is_symmetric() and z.is_toeplitz()
        out.append(Check(f"{side} impedance symmetric Toeplitz", ok))
    return out


def _psd_check(name, r):
    herm_err = np.abs(r - np.conj(np.swapaxes(r, -1, -2))).max() / np.abs(r).max()
    w = np.linalg.eigvalsh(r)
    worst = float((w.min(axis=-1) / np.abs(w).max(axis=-1)).min())
    ok = herm_err <= 1e-12 and worst >= -PSD_RTOL
    return Check(name, ok, f"hermitian error {herm_err:.2e}, min eig/max {worst:.2e}")


def _rank_check(H):
    s = np.linalg.svd(H, compute_uv=False)
    if s.shape[-1] < 2:
        return Check("LoS channel rank 1", True, "single column or row")
    rel = float((s[..., 1] / s[..., 0]).max())
    return Check("LoS channel rank 1", rel < RANK_RTOL, f"max s2/s1 {rel:.2e}")


def check_scenario(scenario, points=16):
    """Run every structural check on ``scenario``; returns a list of :class:`Check`."""
    f = check_frequencies(scenario, points)
    checks = _impedance_checks(scenario, f)
    tx, rx = scenario.tx, scenario.rx
    model = LinkModel(scenario, tx, rx, f)

    try:
        los = model.los()
        checks.append(_psd_check("LoS noise covariance Hermitian PSD", los.R_n))
        checks.append(_rank_check(los.H))
    except InternalConsistencyError as exc:
        checks.append(Check("LoS noise covariance Hermitian PSD", False, str(exc)))

    try:
        first = model.rayleigh(0)
        again = LinkModel(scenario, tx, rx, f).rayleigh(0)
        checks.append(_psd_check("Rayleigh noise covariance Hermitian PSD", first.R_n))
        same = np.array_equal(first.H, again.H) and np.array_equal(first.R_n, again.R_n)
        checks.append(Check("deterministic under fixed seed", same))
    except InternalConsistencyError as exc:
        checks.append(Check("Rayleigh noise covariance Hermitian PSD", False, str(exc)))

    worst = 0.0
    for geom, theta in ((tx, scenario.link_theta_t), (rx, scenario.link_theta_r)):
        a = steering_vector(geom.count, geom.spacing_delta, theta, f, scenario.link_angle_convention)
        worst = max(worst, float(np.abs(np.abs(a) - 1).max()))
    checks.append(Check("steering vectors unit modulus", worst <= 1e-12, f"max deviation {worst:.2e}"))

    zero = np.zeros(f.shape + (rx.count, tx.count), dtype=complex)
    blocks = MultiportBlocks(f, model.tx_Z.entries, model.rx_Z.entries, zero)
    ff = realize(blocks, scenario.fe, "FF")
    nf = realize(blocks, scenario.fe, "NF")
    same = np.array_equal(ff.H, nf.H) and np.array_equal(ff.R_n, nf.R_n)
    checks.append(Check("FF equals NF when Z_RT = 0", same))
    return checks
