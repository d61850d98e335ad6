"""Mutual impedance between Chu antennas and ULA impedance matrices.

The pairwise model is the induced-EMF mutual impedance of two canonical
minimum scattering Chu antennas, scaled by the geometric mean of their
radiation resistances. A uniform linear array only needs ``count - 1``
distinct pair terms per frequency; the full matrix is the symmetric
Toeplitz expansion of that first row.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass

import numpy as np

from .chu import ChuElement, self_impedance, self_impedance_parts
from .constants import SPEED_OF_LIGHT
from .errors import FormatError, ValidationError
from .special import tight_coupling_ratio

#: Smallest spacing-to-radius ratio accepted for arrays with at least two elements.
RATIO_FLOOR = 4.0 / 3.0
#: Below this ratio neighbouring Chu spheres intersect.
OVERLAP_RATIO = 2.0

SYMMETRY_RTOL = 1e-6


@dataclass(frozen=True)
class Orientation:
    """Element orientation relative to the array axis.

    ``beta`` and ``gamma`` are the rotations of the two antennas of a pair
    with respect to the line joining them, in radians.
    """

    beta: float
    gamma: float
    name: str = "custom"

    @classmethod
    def custom(cls, beta, gamma):
        return cls(float(beta), float(gamma), "custom")

    @classmethod
    def parse(cls, text):
        key = str(text).strip().lower()
        if key in ORIENTATIONS:
            return ORIENTATIONS[key]
        if key.startswith("custom(") and key.endswith(")"):
            beta, gamma = (float(v) for v in key[7:-1].split(","))
            return cls.custom(beta, gamma)
        raise ValueError(f"unknown orientation {text!r}; expected colinear, parallel or custom(beta,gamma)")

    def __str__(self):
        if self.name == "custom":
            return f"custom({self.beta!r},{self.gamma!r})"
        return self.name


COLINEAR = Orientation(0.0, np.pi, "colinear")
PARALLEL = Orientation(np.pi / 2, np.pi / 2, "parallel")
ORIENTATIONS = {"colinear": COLINEAR, "parallel": PARALLEL}


@dataclass(frozen=True)
class ArrayGeometry:
    """A uniform linear array of identical Chu elements.

    Attributes
    ----------
    count : int
        Number of elements.
    spacing_delta : float
        Inter-element spacing in meters.
    orientation : Orientation
    element : ChuElement
    """

    count: int
    spacing_delta: float
    orientation: Orientation = COLINEAR
    element: ChuElement | None = None

    def __post_init__(self):
        if self.element is None:
            # tight-coupling default: a = delta / (6 zeta(3))^(1/3)
            radius = self.spacing_delta / tight_coupling_ratio()
            object.__setattr__(self, "element", ChuElement(radius))
        if int(self.count) != self.count or self.count < 1:
            raise ValueError(f"count must be a positive integer, got {self.count!r}")
        if not self.spacing_delta > 0:
            raise ValueError(f"spacing_delta must be > 0, got {self.spacing_delta!r}")
        if self.count > 1 and self.ratio < RATIO_FLOOR * (1 - 1e-12):
            raise ValidationError(
                f"spacing-to-radius ratio {self.ratio:.6g} is below the floor {RATIO_FLOOR:.6g}"
            )

    @classmethod
    def from_ratio(cls, count, spacing_delta, ratio, orientation=COLINEAR, resistance_R=50.0):
        """Build an array whose element radius is ``spacing_delta / ratio``."""
        return cls(count, spacing_delta, orientation, ChuElement(spacing_delta / ratio, resistance_R))

    @property
    def ratio(self):
        """Spacing-to-antenna-size ratio ``delta / a``."""
        return self.spacing_delta / self.element.radius_a

    @property
    def overlapping(self):
        return self.count > 1 and self.ratio < OVERLAP_RATIO

    def pair_distance(self, p, q):
        return abs(p - q) * self.spacing_delta


@dataclass(frozen=True, eq=False)
class ImpedanceMatrix:
    """Impedance matrix of one array, possibly stacked over frequency.

    ``entries`` has shape ``(n, n)`` for a scalar ``frequency`` or
    ``(F, n, n)`` when ``frequency`` is a length-``F`` array.
    ``overlapping`` flags arrays whose Chu spheres intersect, where the
    coupling model is only approximate.
    """

    frequency: float | np.ndarray
    entries: np.ndarray
    overlapping: bool = False

    @property
    def n(self):
        return self.entries.shape[-1]

    @property
    def real(self):
        return self.entries.real

    def at(self, index):
        """Slice one frequency out of a stacked matrix."""
        return ImpedanceMatrix(np.asarray(self.frequency)[index], self.entries[index], self.overlapping)

    def is_symmetric(self, rtol=1e-12):
        z = self.entries
        scale = max(np.abs(z).max(), np.finfo(float).tiny)
        return bool(np.all(np.abs(z - np.swapaxes(z, -1, -2)) <= rtol * scale))

    def is_toeplitz(self, rtol=1e-12):
        z = self.entries
        n = self.n
        scale = max(np.abs(z).max(), np.finfo(float).tiny)
        for k in range(n):
            diag = np.diagonal(z, offset=k, axis1=-2, axis2=-1)
            if np.any(np.abs(diag - diag[..., :1]) > rtol * scale):
                return False
        return True


def _snap(v):
    # angles in the orientation table are multiples of pi/2; keep their
    # trig values exact so vanishing terms vanish exactly
    return np.where(np.abs(v) < 1e-15, 0.0, v)


def mutual_impedance(tx: ChuElement, rx: ChuElement, d, beta, gamma, f):
    """Mutual impedance between two Chu antennas.

    Parameters
    ----------
    tx, rx : ChuElement
        The two antennas; only their radiation resistances enter.
    d : float or array
        Separation in meters.
    beta, gamma : float
        Orientation angles of the pair in radians.
    f : float or array
        Frequency in Hz. ``d`` and ``f`` broadcast together.

    Returns
    -------
    complex or ndarray
        ``-3 sqrt(Re Z_t Re Z_r) [ sin(b) sin(g)/2 (u + u^2 + u^3)
        + cos(g) cos(b) (u^2 + u^3) ] exp(-j k0 d)`` with ``u = 1/(j k0 d)``.
    """
    d = np.asarray(d, dtype=float)
    if np.any(~(d > 0)):
        raise ValueError("separation d must be > 0; coincident antennas are undefined")
    f = np.asarray(f, dtype=float)
    re_t, _ = self_impedance_parts(tx, f)
    re_r, _ = self_impedance_parts(rx, f)
    k0d = 2 * np.pi * f * d / SPEED_OF_LIGHT
    u = 1.0 / (1j * k0d)
    u2 = u * u
    u3 = u2 * u
    sin_term = 0.5 * _snap(np.sin(beta)) * _snap(np.sin(gamma)) * (u + u2 + u3)
    cos_term = _snap(np.cos(gamma)) * _snap(np.cos(beta)) * (u2 + u3)
    z = -3.0 * np.sqrt(re_t * re_r) * (sin_term + cos_term) * np.exp(-1j * k0d)
    if z.ndim == 0:
        return complex(z)
    return z


def toeplitz_row(geom: ArrayGeometry, f, coupled=True):
    """First row of the array impedance matrix, shape ``f.shape + (count,)``."""
    f = np.asarray(f, dtype=float)
    n = geom.count
    row = np.zeros(f.shape + (n,), dtype=complex)
    row[..., 0] = self_impedance(geom.element, f)
    if coupled and n > 1:
        lags = np.arange(1, n) * geom.spacing_delta
        row[..., 1:] = mutual_impedance(
            geom.element,
            geom.element,
            lags,
            geom.orientation.beta,
            geom.orientation.gamma,
            f[..., None],
        )
    return row


def array_impedance(geom: ArrayGeometry, f, coupled=True) -> ImpedanceMatrix:
    """Impedance matrix of a ULA.

    The diagonal holds the Chu self-impedance. Off-diagonal entries are the
    pair mutual impedances at distance ``|p - q| delta`` when ``coupled``,
    and zero for the weakly coupled baseline.
    """
    row = toeplitz_row(geom, f, coupled)
    idx = np.abs(np.subtract.outer(np.arange(geom.count), np.arange(geom.count)))
    entries = row[..., idx]
    freq = float(f) if np.ndim(f) == 0 else np.asarray(f, dtype=float)
    return ImpedanceMatrix(freq, entries, overlapping=bool(coupled and geom.overlapping))


def _format_complex(z):
    return f"{z.real:.15g}{z.imag:+.15g}j"


def save_impedance_matrix(matrix: ImpedanceMatrix, destination):
    """Write a single-frequency matrix in the text table format.

    ``destination`` is a path or a writable text stream.
    """
    z = np.asarray(matrix.entries)
    if z.ndim != 2:
        raise FormatError("only single-frequency matrices can be written")
    lines = [f"# f={float(matrix.frequency):.15g} n={z.shape[0]}"]
    lines += [",".join(_format_complex(v) for v in row) for row in z]
    text = "\n".join(lines) + "\n"
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w") as fh:
            fh.write(text)


def _read_source(source):
    if hasattr(source, "read"):
        return source.read()
    if isinstance(source, (str, os.PathLike)) and os.path.exists(source):
        with open(source) as fh:
            return fh.read()
    if isinstance(source, str):
        return source
    raise FormatError(f"cannot read impedance table from {source!r}")


def _parse_header(line):
    fields = {}
    for token in line.lstrip("#").split():
        key, sep, value = token.partition("=")
        if not sep:
            raise FormatError(f"malformed header token {token!r}")
        fields[key.strip()] = value.strip()
    try:
        return float(fields["f"]), int(fields["n"])
    except (KeyError, ValueError) as exc:
        raise FormatError(f"header must be '# f=<Hz> n=<count>', got {line!r}") from exc


def load_impedance_matrix(source, rtol=SYMMETRY_RTOL) -> ImpedanceMatrix:
    """Read an impedance matrix produced by simulation or measurement.

    The table has a header line ``# f=<Hz> n=<count>`` followed by ``n``
    rows of ``n`` comma-separated complex entries written as ``re+imj``.
    ``source`` is a path, a text stream, or the table text itself.

    Raises
    ------
    FormatError
        Missing header, bad numbers, or a non-square table.
    ValidationError
        An entry differs from its transpose by more than ``rtol``
        relative to the larger of the two.
    """
    text = _read_source(source)
    lines = [ln.strip() for ln in io.StringIO(text) if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise FormatError("missing '# f=<Hz> n=<count>' header")
    f, n = _parse_header(lines[0])
    rows = []
    for ln in lines[1:]:
        try:
            rows.append([complex(tok.strip().replace(" ", "")) for tok in ln.split(",")])
        except ValueError as exc:
            raise FormatError(f"bad complex entry in row {ln!r}") from exc
    if len(rows) != n or any(len(r) != n for r in rows):
        shape = (len(rows), max((len(r) for r in rows), default=0))
        raise FormatError(f"expected a {n}x{n} table, got {shape[0]} rows x {shape[1]} columns")
    z = np.array(rows, dtype=complex)
    zt = z.T
    scale = np.maximum(np.abs(z), np.abs(zt))
    bad = np.abs(z - zt) > rtol * scale
    if np.any(bad):
        p, q = np.argwhere(bad)[0]
        raise ValidationError(f"matrix is not reciprocal: Z[{p},{q}]={z[p, q]} vs Z[{q},{p}]={z[q, p]}")
    return ImpedanceMatrix(f, z)
