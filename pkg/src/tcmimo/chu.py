"""Self-impedance of a Chu antenna radiating only the lowest TM mode.

The TM1 mode of a sphere of radius ``a`` is equivalent to a series
capacitor ``C = a / (c R)`` feeding a shunt ``L = a R / c`` in parallel with
a resistor ``R``. Everything here is a closed form of that ladder.

Units: frequencies in Hz, lengths in meters, impedances in ohms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import SPEED_OF_LIGHT

DEFAULT_RESISTANCE = 50.0


@dataclass(frozen=True)
class ChuElement:
    """A Chu antenna confined to a sphere.

    Attributes
    ----------
    radius_a : float
        Sphere radius in meters.
    resistance_R : float
        Ladder-network resistance in ohms.
    """

    radius_a: float
    resistance_R: float = DEFAULT_RESISTANCE

    def __post_init__(self):
        if not self.radius_a > 0:
            raise ValueError(f"radius_a must be > 0, got {self.radius_a!r}")
        if not self.resistance_R > 0:
            raise ValueError(f"resistance_R must be > 0, got {self.resistance_R!r}")

    def ka(self, f):
        """Electrical size ``2 pi f a / c``."""
        return 2 * np.pi * np.asarray(f, dtype=float) * self.radius_a / SPEED_OF_LIGHT


def _check_frequency(f):
    f = np.asarray(f, dtype=float)
    if np.any(~(f > 0)):
        raise ValueError("frequency must be strictly positive")
    return f


def self_impedance_parts(elem: ChuElement, f):
    """Real and imaginary parts of the Chu self-impedance.

    With ``x = 2 pi f a / c``::

        Re = R x^2 / (1 + x^2)
        Im = -R / (x (1 + x^2))

    ``f`` may be a scalar or an array; the outputs broadcast with it.
    """
    x = elem.ka(_check_frequency(f))
    x2 = x * x
    R = elem.resistance_R
    real = R * x2 / (1.0 + x2)
    imag = -R / (x * (1.0 + x2))
    if real.ndim == 0:
        return float(real), float(imag)
    return real, imag


def self_impedance(elem: ChuElement, f):
    """Complex self-impedance ``Z_Chu(f)`` in ohms.

    Identical, component for component, to :func:`self_impedance_parts`.

    >>> import math
    >>> from tcmimo.constants import SPEED_OF_LIGHT
    >>> e = ChuElement(radius_a=1.0)
    >>> self_impedance(e, SPEED_OF_LIGHT / (2 * math.pi))
    (25-25j)
    """
    real, imag = self_impedance_parts(elem, f)
    if np.ndim(real) == 0:
        return complex(real, imag)
    return real + 1j * imag


def ladder_impedance(elem: ChuElement, f):
    """Impedance of the TM1 ladder summed branch by branch.

    ``Z_C + (Z_L || R)``. Kept separate from :func:`self_impedance` so the
    rational closed form can be checked against the circuit it came from.
    """
    f = _check_frequency(f)
    w = 2 * np.pi * f
    R = elem.resistance_R
    C = elem.radius_a / (SPEED_OF_LIGHT * R)
    L = elem.radius_a * R / SPEED_OF_LIGHT
    zc = 1.0 / (1j * w * C)
    zl = 1j * w * L
    return zc + 1.0 / (1.0 / zl + 1.0 / R)
