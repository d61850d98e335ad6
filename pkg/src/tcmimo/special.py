"""Riemann zeta at 3 and polylogarithms of order 2 and 3 on the unit circle."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import bernoulli

_SERIES_TERMS = 80


@lru_cache(maxsize=None)
def zeta3():
    """Apery's constant ``zeta(3)``.

    Summed from ``zeta(3) = 5/2 sum_{k>=1} (-1)^(k+1) / (k^3 C(2k, k))``,
    whose terms shrink by roughly 4x each, so 40 terms exhaust double
    precision.
    """
    total = 0.0
    for k in range(40, 0, -1):
        total += (-1) ** (k + 1) / (k**3 * math.comb(2 * k, k))
    return 2.5 * total


def tight_coupling_ratio():
    """``(6 zeta(3))^(1/3)``, the asymptotic optimum spacing-to-radius ratio."""
    return (6.0 * zeta3()) ** (1.0 / 3.0)


@lru_cache(maxsize=None)
def _series_coefficients(order):
    # coefficients c_k of mu^k in the expansion of Li_s(e^mu) about mu = 0,
    # excluding the logarithmic k = s - 1 term
    b = bernoulli(_SERIES_TERMS + order + 2)
    coeffs = np.zeros(_SERIES_TERMS + order + 1)
    for k in range(coeffs.size):
        arg = order - k
        if k == order - 1:
            continue
        if arg == 2:
            z = math.pi**2 / 6
        elif arg == 3:
            z = zeta3()
        elif arg == 0:
            z = -0.5
        else:
            n = -arg  # zeta(-n) = -B_{n+1} / (n + 1)
            z = -b[n + 1] / (n + 1)
        coeffs[k] = z / math.factorial(k)
    return coeffs


def _harmonic(n):
    return sum(1.0 / k for k in range(1, n + 1))


def _polylog_angle(order, x):
    """``Li_s(exp(j x))`` for real ``x`` reduced to ``(-pi, pi]``."""
    x = math.remainder(x, 2 * math.pi)
    if x == 0.0:
        return complex(math.pi**2 / 6 if order == 2 else zeta3())
    mu = 1j * x
    coeffs = _series_coefficients(order)
    powers = mu ** np.arange(coeffs.size)
    regular = complex(np.dot(coeffs, powers))
    # log(-mu) with mu = j x: ln|x| - j pi/2 sign(x)
    log_neg_mu = complex(math.log(abs(x)), -math.copysign(math.pi / 2, x))
    singular = mu ** (order - 1) / math.factorial(order - 1) * (_harmonic(order - 1) - log_neg_mu)
    return regular + singular


def polylog(order, z):
    """Polylogarithm ``Li_s(z)`` for ``s`` in {2, 3} and ``|z| = 1``.

    Evaluated through the expansion of ``Li_s(e^mu)`` in powers of ``mu``
    (Bernoulli-number coefficients plus one logarithmic term). For points
    on the unit circle ``|mu| <= pi``, so the series converges
    geometrically with ratio at most 1/2, including near ``z = 1`` where
    the defining series is slowest.

    Accepts a scalar or an array of ``z``.

    Raises
    ------
    ValueError
        If ``order`` is not 2 or 3 or any ``|z|`` differs from 1 by more
        than ``1e-12``.
    """
    if order not in (2, 3):
        raise ValueError(f"order must be 2 or 3, got {order!r}")
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(np.abs(z) - 1.0) > 1e-12):
        raise ValueError("polylog is only implemented on the unit circle |z| = 1")
    angles = np.angle(z)
    out = np.array([_polylog_angle(order, float(x)) for x in angles.ravel()]).reshape(z.shape)
    if out.ndim == 0:
        return complex(out)
    return out
