"""Physical constants (SI)."""

from scipy import constants as _c

SPEED_OF_LIGHT = _c.c  # m/s
BOLTZMANN = _c.k  # J/K
