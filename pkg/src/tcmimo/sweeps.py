"""Sweep orchestration and CSV tables with a provenance header.

A table file starts with ``#``-prefixed ``key = value`` metadata lines
(tool version, sweep, seed, overrides, then every scenario key), followed
by a CSV header row and one CSV record per row. Numbers are written with
12 significant digits.
"""

from __future__ import annotations

import csv
import datetime as _dt
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from . import experiments as ex
from .coupling import RATIO_FLOOR
from .scenario import Scenario, format_value
from .tightcoupling import RATIO_CEILING, tight_coupling_report

SWEEP_KINDS = ("snr-vs-frequency", "rate-vs-ratio", "heatmap", "tight-coupling")
NUMBER_FORMAT = "%.12g"


def default_ratios(points=64):
    return tuple(float(r) for r in np.linspace(RATIO_FLOOR, RATIO_CEILING, points))


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep.

    ``counts`` drives the transmit size of MISO sweeps and the finite
    roots of the tight-coupling report; ``tx_counts`` x ``rx_counts`` is
    the heatmap axis. ``with_rate_sweep`` adds the numerical
    rate-maximizing ratio to a tight-coupling report.
    """

    kind: str
    counts: tuple = (1, 4, 16, 64)
    orientations: tuple = ("colinear", "parallel")
    ratios: tuple = field(default_factory=default_ratios)
    tx_counts: tuple = (4, 8, 16, 32, 64)
    rx_counts: tuple = (4, 8, 16, 32, 64)
    with_rate_sweep: bool = False

    def __post_init__(self):
        if self.kind not in SWEEP_KINDS:
            raise ValueError(f"sweep kind must be one of {SWEEP_KINDS}")
        for name in ("counts", "orientations", "ratios", "tx_counts", "rx_counts"):
            if len(getattr(self, name)) == 0:
                raise ValueError(f"{name} must be non-empty")


@dataclass
class Table:
    """Rows of a sweep plus the metadata needed to reproduce it."""

    columns: tuple
    rows: list = field(default_factory=list)
    metadata: list = field(default_factory=list)
    failure: str | None = None


def _metadata(spec: SweepSpec, scenario: Scenario):
    meta = [
        ("tool", f"tcmimo {__version__}"),
        ("sweep", spec.kind),
        ("seed", str(scenario.seed)),
        ("overrides", ", ".join(scenario.overrides) or "none"),
    ]
    for name in ("counts", "orientations", "tx_counts", "rx_counts", "with_rate_sweep"):
        meta.append((f"spec.{name}", repr(getattr(spec, name))))
    meta.append(("spec.ratios", repr(spec.ratios)))
    meta += [(f"scenario.{k}", format_value(k, v)) for k, v in scenario.items()]
    return meta


def _snr_rows(spec, scenario, threads):
    groups = [(o, n) for o in spec.orientations for n in spec.counts]

    def one(group):
        o, n = group
        grid, snr = ex.snr_curve(scenario, n, o)
        with np.errstate(divide="ignore"):
            db = 10 * np.log10(snr)
        return [(o, n, f, v) for f, v in zip(grid.points, db)]

    return ("orientation", "N", "f_hz", "snr_db"), groups, one


def _ratio_rows(spec, scenario, threads):
    groups = [(o, n) for o in spec.orientations for n in spec.counts]

    def one(group):
        o, n = group
        rates = ex.rate_vs_ratio(scenario, spec.ratios, [n], orientation=o)[n]
        return [(o, n, r, v) for r, v in zip(spec.ratios, rates)]

    return ("orientation", "N", "ratio", "rate_bps"), groups, one


def _heatmap_rows(spec, scenario, threads):
    groups = [(n, m) for n in spec.tx_counts for m in spec.rx_counts]

    def one(group):
        n, m = group
        rate = ex.heatmap(scenario, [n], [m])[(n, m)][0]
        return [(n, m, rate)]

    return ("N", "M", "rate_bps"), groups, one


def _tight_rows(spec, scenario, threads):
    sweep = {}
    if spec.with_rate_sweep:
        counts = [n for n in spec.counts if n > 1]
        rates = ex.rate_vs_ratio(scenario, spec.ratios, counts, orientation="colinear", threads=threads)
        sweep = {n: float(spec.ratios[int(np.argmax(rates[n]))]) for n in counts}
    report = tight_coupling_report(spec.counts, sweep_optimum=sweep)
    nan = math.nan
    rows = [("inf", report.asymptotic_ratio, nan)]
    for n in spec.counts:
        root = report.finite_N_root[n]
        rows.append((n, nan if root is None else root, sweep.get(n, nan)))
    return ("N", "analytic_ratio", "sweep_optimum"), [0], lambda _: rows


_BUILDERS = {
    "snr-vs-frequency": _snr_rows,
    "rate-vs-ratio": _ratio_rows,
    "heatmap": _heatmap_rows,
    "tight-coupling": _tight_rows,
}


def run_sweep(spec: SweepSpec, scenario: Scenario, threads=1) -> Table:
    """Evaluate a sweep into a :class:`Table`.

    Groups of rows are computed in parallel when ``threads > 1`` and kept
    in axis order. If a group fails, the rows of the groups before it are
    kept and ``Table.failure`` carries the error.
    """
    columns, groups, one = _BUILDERS[spec.kind](spec, scenario, threads)
    table = Table(columns, [], _metadata(spec, scenario))
    if len(groups) > 1 and threads and threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(one, g) for g in groups]
            for g, fut in zip(groups, futures):
                try:
                    table.rows.extend(fut.result())
                except Exception as exc:
                    table.failure = f"{g!r}: {type(exc).__name__}: {exc}"
                    break
    else:
        for g in groups:
            try:
                table.rows.extend(one(g))
            except Exception as exc:
                table.failure = f"{g!r}: {type(exc).__name__}: {exc}"
                break
    return table


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return NUMBER_FORMAT % v
    return str(v)


def format_table(table: Table, timestamp=True) -> str:
    """Render ``table`` in the CSV-with-metadata format."""
    buf = io.StringIO()
    for key, value in table.metadata:
        buf.write(f"# {key} = {value}\n")
    if timestamp:
        buf.write(f"# timestamp = {_dt.datetime.now(_dt.timezone.utc).isoformat(timespec='seconds')}\n")
    writer = csv.writer(buf, lineterminator="\n")
    if table.columns:
        writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell(v) for v in row])
    if table.failure is not None:
        buf.write(f"# FAILED: {table.failure}\n")
    return buf.getvalue()


def emit_table(table: Table, destination, timestamp=True):
    """Write ``table`` to a path or a writable text stream."""
    text = format_table(table, timestamp)
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w", newline="") as fh:
            fh.write(text)


def _value(text):
    try:
        return float(text)
    except ValueError:
        return text


def read_table(source) -> Table:
    """Parse a table written by :func:`emit_table`; numeric cells become floats."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source) as fh:
            text = fh.read()
    meta, body, failure = [], [], None
    for line in text.splitlines():
        if line.startswith("# FAILED: "):
            failure = line[len("# FAILED: ") :]
        elif line.startswith("#"):
            key, _, value = line[1:].partition("=")
            meta.append((key.strip(), value.strip()))
        elif line:
            body.append(line)
    records = list(csv.reader(body))
    if not records:
        return Table((), [], meta, failure)
    columns = tuple(records[0])
    rows = [tuple(_value(c) for c in r) for r in records[1:]]
    return Table(columns, rows, meta, failure)
