"""Multiport circuit solve: end-to-end channel and noise covariance.

The MIMO link is an ``(N + M)``-port impedance network driven by ``N``
generators with internal resistance ``R`` and loaded by ``M`` low-noise
amplifiers with input resistance ``R_in`` and voltage gain ``beta``.
Antenna thermal noise has covariance ``4 k T Re{Z}`` and the amplifiers
add ``4 k T R_in (N_f - 1)`` each.

Two variants are kept side by side. ``"NF"`` (bilateral) keeps the
receive-to-transmit back-coupling ``Z_TR``; ``"FF"`` (unilateral) drops it,
which is exact when ``Z_TR = 0`` and a very good approximation at
far-field distances.

All functions broadcast over a leading frequency axis.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .constants import BOLTZMANN
from .coupling import ArrayGeometry, ImpedanceMatrix, array_impedance
from .errors import InternalConsistencyError, SolveError
from .propagation import FadingDraw, LinkConfig, los_transimpedance, rayleigh_transimpedance

MODES = ("FF", "NF")
ILL_CONDITIONED = 1e12


class IllConditionedWarning(RuntimeWarning):
    pass


def _h(a):
    return np.conj(np.swapaxes(a, -1, -2))


@dataclass(frozen=True)
class FrontEndConfig:
    """Generator and receive-amplifier parameters.

    Attributes
    ----------
    generator_R : float
        Generator internal resistance, ohms.
    lna_gain_beta : float
        Amplifier voltage gain (linear).
    lna_input_R_in : float
        Amplifier input resistance, ohms.
    noise_figure_Nf : float
        Amplifier noise figure (linear, >= 1).
    temperature_T : float
        Ambient temperature, kelvin.
    """

    generator_R: float = 50.0
    lna_gain_beta: float = 10.0
    lna_input_R_in: float = 50.0
    noise_figure_Nf: float = 2.0
    temperature_T: float = 290.0

    def __post_init__(self):
        if not self.generator_R > 0:
            raise ValueError("generator_R must be > 0")
        if not self.lna_input_R_in > 0:
            raise ValueError("lna_input_R_in must be > 0")
        if not self.noise_figure_Nf >= 1:
            raise ValueError("noise_figure_Nf must be >= 1")
        if not self.temperature_T > 0:
            raise ValueError("temperature_T must be > 0")


@dataclass(frozen=True, eq=False)
class MultiportBlocks:
    """The four blocks of the joint impedance matrix at one or more frequencies.

    ``Z_TR`` defaults to ``Z_RT`` transposed (reciprocity).
    """

    frequency: float | np.ndarray
    Z_T: np.ndarray
    Z_R: np.ndarray
    Z_RT: np.ndarray
    Z_TR: np.ndarray | None = None

    def __post_init__(self):
        if self.Z_TR is None:
            object.__setattr__(self, "Z_TR", np.swapaxes(self.Z_RT, -1, -2))
        n, m = self.Z_T.shape[-1], self.Z_R.shape[-1]
        if self.Z_RT.shape[-2:] != (m, n) or self.Z_TR.shape[-2:] != (n, m):
            raise ValueError("block shapes are inconsistent")

    @property
    def N(self):
        return self.Z_T.shape[-1]

    @property
    def M(self):
        return self.Z_R.shape[-1]

    def joint(self):
        """The full ``(N + M)`` square impedance matrix."""
        top = np.concatenate([self.Z_T, self.Z_TR], axis=-1)
        bottom = np.concatenate([self.Z_RT, self.Z_R], axis=-1)
        return np.concatenate([top, bottom], axis=-2)


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """Channel ``H`` (dimensionless) and noise covariance ``R_n`` (V^2/Hz)."""

    frequency: float | np.ndarray
    H: np.ndarray
    R_n: np.ndarray
    condition: float = 1.0
    warnings: tuple = field(default_factory=tuple)


def _check_mode(mode):
    mode = str(mode).upper()
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


def _inverse(a):
    """Inverse of a stack of matrices plus its worst 1-norm condition number.

    LU solve followed by one refinement step ``X <- X + X (I - A X)``.
    """
    a = np.asarray(a)
    eye = np.broadcast_to(np.eye(a.shape[-1], dtype=a.dtype), a.shape)
    try:
        x = np.linalg.solve(a, eye)
    except np.linalg.LinAlgError as exc:
        raise SolveError("matrix is singular to working precision") from exc
    x = x + x @ (eye - a @ x)
    cond = np.linalg.norm(a, 1, axis=(-2, -1)) * np.linalg.norm(x, 1, axis=(-2, -1))
    worst = float(np.max(cond)) if cond.size else 1.0
    if not np.isfinite(worst) or worst * np.finfo(float).eps > 1:
        raise SolveError(f"matrix is singular to working precision (condition {worst:.3e})", worst)
    if worst > ILL_CONDITIONED:
        warnings.warn(f"ill-conditioned solve (condition {worst:.3e})", IllConditionedWarning, stacklevel=3)
    return x, worst


def _p_with_cond(blocks, fe):
    eye = np.eye(blocks.M)
    return _inverse(blocks.Z_R + fe.lna_input_R_in * eye)


def _q_with_cond(blocks, fe, mode, P=None):
    mode = _check_mode(mode)
    a = blocks.Z_T + fe.generator_R * np.eye(blocks.N)
    if mode == "NF":
        if P is None:
            P, _ = _p_with_cond(blocks, fe)
        a = a - blocks.Z_TR @ P @ blocks.Z_RT
    return _inverse(a)


def p_matrix(blocks: MultiportBlocks, fe: FrontEndConfig):
    """``P = (Z_R + R_in I)^-1``, shape ``(..., M, M)``."""
    return _p_with_cond(blocks, fe)[0]


def q_matrix(blocks: MultiportBlocks, fe: FrontEndConfig, mode="FF"):
    """Transmit-side resolvent.

    ``FF``: ``(Z_T + R I)^-1``. ``NF``: ``(Z_T + R I - Z_TR P Z_RT)^-1``.
    """
    return _q_with_cond(blocks, fe, mode)[0]


def channel_matrix(blocks: MultiportBlocks, fe: FrontEndConfig, mode="FF"):
    """``H = beta R_in P Z_RT Q`` mapping generator to load voltages."""
    P = p_matrix(blocks, fe)
    Q = _q_with_cond(blocks, fe, mode, P)[0]
    return fe.lna_gain_beta * fe.lna_input_R_in * (P @ blocks.Z_RT @ Q)


def _validate_covariance(r, rtol=1e-9):
    scale = np.abs(r).max(axis=(-2, -1), keepdims=True)
    tiny = np.finfo(float).tiny
    if np.any(np.abs(r - _h(r)) > rtol * np.maximum(scale, tiny)):
        raise InternalConsistencyError("noise covariance is not Hermitian")
    herm = 0.5 * (r + _h(r))
    w = np.linalg.eigvalsh(herm)
    lmax = np.max(np.abs(w), axis=-1, keepdims=True)
    if np.any(w < -rtol * lmax):
        raise InternalConsistencyError("noise covariance is not positive semi-definite")
    return herm


def noise_covariance(blocks: MultiportBlocks, fe: FrontEndConfig, mode="FF", *, _PQ=None):
    """Covariance of the noise at the amplifier outputs, ``(..., M, M)``.

    ``FF``::

        4 k T R_in [ (N_f - 1) I + beta^2 R_in ( P Re{Z_R} P^H
                     + P Z_RT Q Re{Z_T} Q^H Z_RT^H P^H ) ]

    ``NF`` replaces ``P`` in the receive-noise term by
    ``A = P (I + Z_RT Q Z_TR P)``, the transfer of the receive antenna
    noise once it has been re-radiated through the transmit array, and
    uses the bilateral ``Q``. It coincides with ``FF`` when ``Z_TR = 0``.

    Raises
    ------
    InternalConsistencyError
        If the result is not Hermitian positive semi-definite to ``1e-9``.
    """
    mode = _check_mode(mode)
    if _PQ is None:
        P, _ = _p_with_cond(blocks, fe)
        Q, _ = _q_with_cond(blocks, fe, mode, P)
    else:
        P, Q = _PQ
    re_T = blocks.Z_T.real
    re_R = blocks.Z_R.real
    if mode == "NF":
        A = P + P @ blocks.Z_RT @ Q @ blocks.Z_TR @ P
    else:
        A = P
    G = P @ blocks.Z_RT @ Q
    antenna = A @ re_R @ _h(A) + G @ re_T @ _h(G)
    eye = np.eye(blocks.M)
    r = 4 * BOLTZMANN * fe.temperature_T * fe.lna_input_R_in * (
        (fe.noise_figure_Nf - 1.0) * eye + fe.lna_gain_beta**2 * fe.lna_input_R_in * antenna
    )
    return _validate_covariance(r)


def realize(blocks: MultiportBlocks, fe: FrontEndConfig, mode="FF") -> ChannelRealization:
    """Channel and noise covariance from a set of impedance blocks."""
    mode = _check_mode(mode)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IllConditionedWarning)
        P, cp = _p_with_cond(blocks, fe)
        Q, cq = _q_with_cond(blocks, fe, mode, P)
    H = fe.lna_gain_beta * fe.lna_input_R_in * (P @ blocks.Z_RT @ Q)
    R_n = noise_covariance(blocks, fe, mode, _PQ=(P, Q))
    notes = tuple(str(w.message) for w in caught)
    return ChannelRealization(blocks.frequency, H, R_n, max(cp, cq), notes)


def solve_link(
    tx_geom: ArrayGeometry,
    rx_geom: ArrayGeometry,
    link: LinkConfig,
    fe: FrontEndConfig,
    channel_kind="los",
    mode="FF",
    f=None,
    coupled=True,
    tx_Z: ImpedanceMatrix | None = None,
    rx_Z: ImpedanceMatrix | None = None,
) -> ChannelRealization:
    """Assemble the impedance blocks of a link and solve the circuit.

    Parameters
    ----------
    channel_kind : "los" or FadingDraw
        Line of sight, or correlated Rayleigh with the given fading draw.
    coupled : bool
        Include intra-array mutual coupling. Ignored for an array whose
        impedance is supplied through ``tx_Z`` / ``rx_Z``.
    tx_Z, rx_Z : ImpedanceMatrix, optional
        Externally obtained array impedances (simulation or measurement)
        that replace the Chu model.
    """
    if f is None:
        raise ValueError("frequency f is required")
    f = np.asarray(f, dtype=float)
    if tx_Z is None:
        tx_Z = array_impedance(tx_geom, f, coupled)
    if rx_Z is None:
        rx_Z = array_impedance(rx_geom, f, coupled)
    if isinstance(channel_kind, FadingDraw):
        Z_RT = rayleigh_transimpedance(tx_Z, rx_Z, link, channel_kind, f)
    elif str(channel_kind).lower() == "los":
        Z_RT = los_transimpedance(tx_Z, rx_Z, tx_geom, rx_geom, link, f)
    else:
        raise ValueError(f"unknown channel kind {channel_kind!r}")
    blocks = MultiportBlocks(f if f.ndim else float(f), tx_Z.entries, rx_Z.entries, Z_RT)
    return realize(blocks, fe, mode)
