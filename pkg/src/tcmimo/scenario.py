"""Scenario configuration: defaults, flat dotted-key text format, validation.

A config document is a list of ``key = value`` lines; ``#`` starts a
comment. Keys are dotted (``tx.count = 16``). Anything not given takes the
default below, and the keys that were given are remembered as overrides
so output files can echo them.
"""

from __future__ import annotations

import dataclasses
import io
import os
from dataclasses import dataclass, field, fields

from .chu import ChuElement
from .constants import SPEED_OF_LIGHT
from .coupling import ArrayGeometry, Orientation
from .errors import FormatError, ValidationError
from .network import MODES, FrontEndConfig
from .propagation import CHU_GAIN, LinkConfig
from .rate import PRECODING, BandSet, FrequencyGrid, voltage_budget
from .special import tight_coupling_ratio

CHANNELS = ("los", "rayleigh")
_SECTIONS = ("tx", "rx", "antenna", "link", "fe", "grid", "power", "miso")

#: Distance default in units of the wavelength at the lowest frequency.
FAR_FIELD_WAVELENGTHS = 30.0


def _key_of(name):
    head, _, tail = name.partition("_")
    return f"{head}.{tail}" if head in _SECTIONS and tail else name


@dataclass(frozen=True)
class Scenario:
    """Every input of a simulation run, as plain values.

    Object views (:attr:`tx`, :attr:`rx`, :attr:`link`, :attr:`fe`,
    :attr:`bands`, grids) are built on demand. ``link_distance = None``
    means ``30`` wavelengths at ``grid_f_min``.
    """

    tx_count: int = 16
    tx_spacing: float = 0.005
    tx_ratio: float = field(default_factory=tight_coupling_ratio)
    tx_orientation: str = "colinear"
    rx_count: int = 16
    rx_spacing: float = 0.005
    rx_ratio: float = field(default_factory=tight_coupling_ratio)
    rx_orientation: str = "colinear"
    antenna_resistance: float = 50.0
    coupled: bool = True
    link_distance: float | None = None
    link_alpha: float = 3.5
    link_gain_t: float = CHU_GAIN
    link_gain_r: float = CHU_GAIN
    link_theta_t: float = 0.0
    link_theta_r: float = 0.0
    link_angle_convention: str = "cos"
    fe_generator_r: float = 50.0
    fe_lna_gain: float = 10.0
    fe_lna_input_r: float = 50.0
    fe_noise_figure: float = 2.0
    fe_temperature: float = 290.0
    grid_f_min: float = 100e6
    grid_f_max: float = 30e9
    grid_span_points: int = 2048
    grid_band_points: int = 512
    grid_log: bool = True
    bands: tuple = BandSet().bands
    power_p_max: float = 2.0
    power_convention: str = "available"
    miso_radius_factor: float = 100.0
    channel: str = "los"
    mode: str = "FF"
    precoding: str = "optimum"
    seed: int = 0
    monte_carlo_draws: int = 100
    overrides: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "bands", BandSet(self.bands).bands)
        object.__setattr__(self, "mode", str(self.mode).upper())
        object.__setattr__(self, "channel", str(self.channel).lower())
        object.__setattr__(self, "precoding", str(self.precoding).lower())
        if self.channel not in CHANNELS:
            raise ValidationError(f"channel must be one of {CHANNELS}")
        if self.mode not in MODES:
            raise ValidationError(f"mode must be one of {MODES}")
        if self.precoding not in PRECODING:
            raise ValidationError(f"precoding must be one of {PRECODING}")
        if self.monte_carlo_draws < 1:
            raise ValidationError("monte_carlo_draws must be >= 1")
        if self.grid_span_points < 2 or self.grid_band_points < 2:
            raise ValidationError("grids need at least 2 points")
        if not 0 < self.grid_f_min < self.grid_f_max:
            raise ValidationError("need 0 < grid.f_min < grid.f_max")
        if not self.miso_radius_factor > 0:
            raise ValidationError("miso.radius_factor must be > 0")
        try:
            self.tx, self.rx, self.link, self.fe
            voltage_budget(self.power_p_max, self.fe_generator_r, self.power_convention)
        except ValidationError:
            raise
        except ValueError as exc:
            raise ValidationError(str(exc)) from exc

    # object views

    def make_array(self, count, spacing, ratio, orientation):
        if not ratio > 0:
            raise ValidationError("ratio must be > 0")
        return ArrayGeometry.from_ratio(
            count, spacing, ratio, Orientation.parse(orientation), self.antenna_resistance
        )

    @property
    def tx(self) -> ArrayGeometry:
        return self.make_array(self.tx_count, self.tx_spacing, self.tx_ratio, self.tx_orientation)

    @property
    def rx(self) -> ArrayGeometry:
        return self.make_array(self.rx_count, self.rx_spacing, self.rx_ratio, self.rx_orientation)

    def miso_receiver(self, orientation=None) -> ArrayGeometry:
        """Single receive element of radius ``miso_radius_factor * rx_spacing``."""
        orient = Orientation.parse(orientation or self.rx_orientation)
        radius = self.miso_radius_factor * self.rx_spacing
        return ArrayGeometry(1, self.rx_spacing, orient, ChuElement(radius, self.antenna_resistance))

    @property
    def distance(self):
        if self.link_distance is not None:
            return self.link_distance
        return FAR_FIELD_WAVELENGTHS * SPEED_OF_LIGHT / self.grid_f_min

    @property
    def link(self) -> LinkConfig:
        return LinkConfig(
            self.distance,
            self.link_alpha,
            self.link_gain_t,
            self.link_gain_r,
            self.link_theta_t,
            self.link_theta_r,
            self.link_angle_convention,
        )

    @property
    def fe(self) -> FrontEndConfig:
        return FrontEndConfig(
            self.fe_generator_r, self.fe_lna_gain, self.fe_lna_input_r, self.fe_noise_figure, self.fe_temperature
        )

    @property
    def band_set(self) -> BandSet:
        return BandSet(self.bands)

    def span_grid(self) -> FrequencyGrid:
        return FrequencyGrid.span(self.grid_f_min, self.grid_f_max, self.grid_span_points, self.grid_log)

    def band_grid(self) -> FrequencyGrid:
        return FrequencyGrid.for_bands(self.band_set, self.grid_band_points)

    @property
    def power_budget(self):
        """Generator voltage-PSD budget for ``power_p_max``."""
        return voltage_budget(self.power_p_max, self.fe_generator_r, self.power_convention)

    @property
    def power_density(self):
        """Flat voltage PSD spreading the budget over ``[f_min, f_max]``."""
        return self.power_budget / (self.grid_f_max - self.grid_f_min)

    def replace(self, **changes):
        """Copy with fields changed; the changed keys join the overrides."""
        keys = tuple(_key_of(k) for k in changes)
        merged = tuple(dict.fromkeys(self.overrides + keys))
        return dataclasses.replace(self, overrides=merged, **changes)

    def items(self):
        """``(dotted key, value)`` pairs for every field."""
        return [(_key_of(f.name), getattr(self, f.name)) for f in fields(self) if f.name != "overrides"]


_FIELDS = {_key_of(f.name): f for f in fields(Scenario) if f.name != "overrides"}
VALID_KEYS = tuple(sorted(_FIELDS)) + ("ratio",)
_DEFAULTS = Scenario()


def _parse_bool(text):
    t = text.strip().lower()
    if t in ("true", "yes", "on", "1"):
        return True
    if t in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_bands(text):
    out = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        lo, sep, hi = chunk.partition(":")
        if not sep:
            raise ValueError(f"band {chunk!r} must be written lo:hi")
        out.append((float(lo), float(hi)))
    return tuple(out)


def _format_bands(bands):
    return ", ".join(f"{lo!r}:{hi!r}" for lo, hi in bands)


def _convert(key, text):
    default = getattr(_DEFAULTS, _FIELDS[key].name)
    if key == "bands":
        return _parse_bands(text)
    if key == "link.distance":
        return None if text.strip().lower() in ("auto", "none") else float(text)
    if isinstance(default, bool):
        return _parse_bool(text)
    if isinstance(default, int):
        value = float(text)
        if value != int(value):
            raise ValueError(f"{text!r} is not an integer")
        return int(value)
    if isinstance(default, float):
        return float(text)
    return text.strip()


def format_value(key, value):
    """Text form of a value that :func:`parse_scenario` reads back exactly."""
    if key == "bands":
        return _format_bands(value)
    if value is None:
        return "auto"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _read_text(source):
    if hasattr(source, "read"):
        return source.read()
    if isinstance(source, os.PathLike) or (isinstance(source, str) and "\n" not in source and os.path.isfile(source)):
        with open(source) as fh:
            return fh.read()
    return str(source)


def parse_scenario(source="") -> Scenario:
    """Parse a config document (text, path or stream) into a Scenario.

    ``ratio`` is shorthand for setting ``tx.ratio`` and ``rx.ratio`` together.

    Raises
    ------
    FormatError
        Malformed line, unknown key, duplicate key, or unparsable value.
    ValidationError
        A value violates a physical constraint.
    """
    values = {}
    for lineno, raw in enumerate(io.StringIO(_read_text(source)), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, text = line.partition("=")
        key = key.strip()
        if not sep:
            raise FormatError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        if key not in VALID_KEYS:
            raise FormatError(f"line {lineno}: unknown key {key!r}; valid keys: {', '.join(VALID_KEYS)}")
        targets = ("tx.ratio", "rx.ratio") if key == "ratio" else (key,)
        for target in targets:
            if target in values:
                raise FormatError(f"line {lineno}: key {target!r} set more than once")
            try:
                values[target] = _convert(target, text)
            except ValueError as exc:
                raise FormatError(f"line {lineno}: bad value for {target!r}: {exc}") from exc
    kwargs = {_FIELDS[k].name: v for k, v in values.items()}
    return Scenario(**kwargs, overrides=tuple(values))


def serialize_scenario(scenario: Scenario, only_overrides=False) -> str:
    """Config text for ``scenario``; every field unless ``only_overrides``."""
    keep = set(scenario.overrides)
    lines = [
        f"{key} = {format_value(key, value)}"
        for key, value in scenario.items()
        if not only_overrides or key in keep
    ]
    return "\n".join(lines) + "\n"
