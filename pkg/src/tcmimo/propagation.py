"""Far-field transimpedance between a transmit and a receive ULA.

Two channel models are provided: line of sight, built from the Friis
equation and therefore rank one, and correlated Rayleigh fading, whose
spatial correlation follows the real parts of the array impedance
matrices. Both accept matrices stacked over frequency.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import SPEED_OF_LIGHT
from .coupling import ArrayGeometry, ImpedanceMatrix
from .errors import NotPSDError, ValidationError

#: Gain of a TM1 Chu antenna in its equatorial plane.
CHU_GAIN = 1.5

ANGLE_CONVENTIONS = ("cos", "sin")


@dataclass(frozen=True)
class LinkConfig:
    """Geometry and path loss of the transmit-receive link.

    Attributes
    ----------
    distance_d : float
        Array separation in meters.
    pathloss_alpha : float
        Path-loss exponent.
    gain_T, gain_R : float
        Antenna gains (linear).
    theta_T, theta_R : float
        Departure and arrival angles in radians.
    angle_convention : {"cos", "sin"}
        Trig function applied to the angle in the steering-vector phase.
        ``"cos"`` is the literal broadside-referenced form; ``"sin"`` is
        kept for sensitivity checks.
    """

    distance_d: float
    pathloss_alpha: float = 3.5
    gain_T: float = CHU_GAIN
    gain_R: float = CHU_GAIN
    theta_T: float = 0.0
    theta_R: float = 0.0
    angle_convention: str = "cos"

    def __post_init__(self):
        if not self.distance_d > 0:
            raise ValueError(f"distance_d must be > 0, got {self.distance_d!r}")
        if not self.pathloss_alpha > 0:
            raise ValueError(f"pathloss_alpha must be > 0, got {self.pathloss_alpha!r}")
        if not (self.gain_T > 0 and self.gain_R > 0):
            raise ValueError("antenna gains must be > 0")
        if self.angle_convention not in ANGLE_CONVENTIONS:
            raise ValueError(f"angle_convention must be one of {ANGLE_CONVENTIONS}")

    def path_amplitude(self, f):
        """``c / (2 pi f d^(alpha/2))``, the amplitude path loss."""
        f = np.asarray(f, dtype=float)
        return SPEED_OF_LIGHT / (2 * np.pi * f * self.distance_d ** (self.pathloss_alpha / 2))


@dataclass(frozen=True, eq=False)
class FadingDraw:
    """One small-scale fading matrix ``F`` with i.i.d. CN(0, 1) entries.

    Real and imaginary parts each have variance 1/2. The matrix is flat
    over frequency.
    """

    seed: int
    matrix_F: np.ndarray
    draw_index: int = 0

    @classmethod
    def generate(cls, seed, m, n, draw_index=0):
        """Draw an ``m x n`` matrix keyed by ``(seed, draw_index)``.

        Uses a Philox counter-based stream so draws can be produced in any
        order or in parallel and still be reproducible.
        """
        bitgen = np.random.Philox(np.random.SeedSequence([int(seed), int(draw_index)]))
        rng = np.random.Generator(bitgen)
        F = (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))) * np.sqrt(0.5)
        return cls(int(seed), F, int(draw_index))


def steering_vector(count, spacing, theta, f, convention="cos"):
    """ULA steering vector.

    Entry ``k`` is ``exp(-j 2 pi k f spacing cos(theta) / c)``; with
    ``convention="sin"`` the cosine is replaced by a sine. ``f`` may be an
    array, in which case the result has shape ``f.shape + (count,)``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    trig = {"cos": np.cos, "sin": np.sin}[convention](theta)
    f = np.asarray(f, dtype=float)
    k = np.arange(count)
    return np.exp(-2j * np.pi * f[..., None] * k * spacing * trig / SPEED_OF_LIGHT)


def _diag_real_sqrt(z: ImpedanceMatrix):
    d = np.diagonal(z.entries, axis1=-2, axis2=-1).real
    if np.any(~(d > 0)):
        raise ValidationError("impedance matrix has a non-positive diagonal resistance")
    return np.sqrt(d)


def los_transimpedance(
    tx_Z: ImpedanceMatrix,
    rx_Z: ImpedanceMatrix,
    tx_geom: ArrayGeometry,
    rx_geom: ArrayGeometry,
    link: LinkConfig,
    f,
):
    """Line-of-sight transimpedance ``Z_RT``, shape ``(..., M, N)`` in ohms.

    ``Z_RT = c sqrt(G_T G_R) / (2 pi f d^(alpha/2))
    diag(Re Z_R)^(1/2) a_R a_T^T diag(Re Z_T)^(1/2) exp(j phi)`` with
    ``phi = pi - atan(k0 a_T) - atan(k0 a_R)``.

    ``phi`` is the combined phase of the two Chu current dividers
    ``j k0 a / (1 + j k0 a)``; its sign follows the element-wise circuit
    derivation.
    """
    f = np.asarray(f, dtype=float)
    if np.any(~(f > 0)):
        raise ValueError("frequency must be strictly positive")
    sT = _diag_real_sqrt(tx_Z)
    sR = _diag_real_sqrt(rx_Z)
    aT = steering_vector(tx_geom.count, tx_geom.spacing_delta, link.theta_T, f, link.angle_convention)
    aR = steering_vector(rx_geom.count, rx_geom.spacing_delta, link.theta_R, f, link.angle_convention)
    phi = np.pi - np.arctan(tx_geom.element.ka(f)) - np.arctan(rx_geom.element.ka(f))
    scale = link.path_amplitude(f) * np.sqrt(link.gain_T * link.gain_R) * np.exp(1j * phi)
    left = sR * aR
    right = sT * aT
    return scale[..., None, None] * left[..., :, None] * right[..., None, :]


def psd_matrix_sqrt(matrix, eps=1e-9, herm_rtol=1e-10):
    """Principal square root of a Hermitian positive semi-definite matrix.

    Works on stacks of matrices. Eigenvalues in ``[-eps*lmax, 0)`` are
    treated as round-off and clamped to zero.

    Raises
    ------
    ValidationError
        Input is not Hermitian within ``herm_rtol``.
    NotPSDError
        An eigenvalue is below ``-eps * lmax``.
    """
    a = np.asarray(matrix)
    ah = np.conj(np.swapaxes(a, -1, -2))
    scale = np.abs(a).max(axis=(-2, -1), keepdims=True)
    if np.any(np.abs(a - ah) > herm_rtol * np.maximum(scale, np.finfo(float).tiny)):
        raise ValidationError("matrix is not Hermitian")
    w, v = np.linalg.eigh(0.5 * (a + ah))
    lmax = np.max(np.abs(w), axis=-1, keepdims=True)
    if np.any(w < -eps * lmax):
        raise NotPSDError(f"matrix has a negative eigenvalue (min {w.min():.3e})")
    root = np.sqrt(np.clip(w, 0.0, None))
    return (v * root[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))


def rayleigh_transimpedance(
    tx_Z: ImpedanceMatrix, rx_Z: ImpedanceMatrix, link: LinkConfig, draw: FadingDraw, f, roots=None
):
    """Correlated Rayleigh transimpedance.

    ``Z_RT = c / (2 pi f d^(alpha/2)) (Re Z_R)^(1/2) F (Re Z_T)^(1/2)``.

    ``roots`` may pass precomputed ``((Re Z_T)^(1/2), (Re Z_R)^(1/2))`` to
    reuse them across draws.
    """
    f = np.asarray(f, dtype=float)
    F = np.asarray(draw.matrix_F)
    if F.shape != (rx_Z.n, tx_Z.n):
        raise ValueError(f"fading matrix shape {F.shape} does not match ({rx_Z.n}, {tx_Z.n})")
    if roots is None:
        roots = psd_matrix_sqrt(tx_Z.real), psd_matrix_sqrt(rx_Z.real)
    rootT, rootR = roots
    return link.path_amplitude(f)[..., None, None] * (rootR @ F @ rootT)
