import io
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tcmimo import __version__
from tcmimo.scenario import Scenario, parse_scenario
from tcmimo.sweeps import SweepSpec, Table, default_ratios, format_table, read_table, run_sweep

SMALL = Scenario().replace(grid_span_points=32, grid_band_points=16, monte_carlo_draws=2)


def meta(table):
    return dict(table.metadata)


def test_default_ratio_grid():
    r = default_ratios()
    assert len(r) == 64
    assert r[0] == pytest.approx(4 / 3) and r[-1] == 4.0


def test_spec_rejects_unknown_kind_and_empty_axes():
    with pytest.raises(ValueError):
        SweepSpec("nonsense")
    with pytest.raises(ValueError):
        SweepSpec("heatmap", tx_counts=())


def test_empty_table_writes_header_only():
    text = format_table(Table(("a", "b"), [], [("tool", "x")]), timestamp=False)
    assert text == "# tool = x\na,b\n"
    back = read_table(io.StringIO(text))
    assert back.columns == ("a", "b") and back.rows == []


@given(st.lists(st.floats(allow_nan=False, allow_infinity=False, width=64), min_size=1, max_size=20))
def test_numbers_round_trip_to_12_digits(values):
    table = Table(("v",), [(v,) for v in values], [])
    back = read_table(io.StringIO(format_table(table, timestamp=False)))
    for (v,), (w,) in zip(table.rows, back.rows):
        assert w == pytest.approx(v, rel=1e-11, abs=0) or (v == 0 and w == 0)
        assert float("%.12g" % v) == w


def test_metadata_records_overrides_and_every_key():
    scn = parse_scenario("tx.count = 4\nseed = 7\n")
    table = run_sweep(SweepSpec("tight-coupling", counts=(2,)), scn)
    m = meta(table)
    assert m["tool"] == f"tcmimo {__version__}"
    assert m["sweep"] == "tight-coupling"
    assert m["seed"] == "7"
    assert m["overrides"] == "tx.count, seed"
    for key, _ in scn.items():
        assert f"scenario.{key}" in m
    # the metadata block reproduces the scenario exactly
    text = "\n".join(f"{k[len('scenario.'):]} = {v}" for k, v in table.metadata if k.startswith("scenario."))
    assert parse_scenario(text) == scn


def test_tight_coupling_rows():
    table = run_sweep(SweepSpec("tight-coupling", counts=(1, 2, 64)), Scenario())
    assert table.columns == ("N", "analytic_ratio", "sweep_optimum")
    assert table.rows[0][0] == "inf"
    assert table.rows[0][1] == pytest.approx(1.9320814273, abs=1e-10)
    assert math.isnan(table.rows[1][1])
    assert table.rows[2][1] == pytest.approx(6 ** (1 / 3), rel=1e-5)


def test_snr_rows_shape():
    table = run_sweep(SweepSpec("snr-vs-frequency", counts=(1, 4), orientations=("colinear",)), SMALL)
    assert table.failure is None
    assert len(table.rows) == 2 * SMALL.grid_span_points
    assert {r[1] for r in table.rows} == {1, 4}


def test_threads_do_not_change_results():
    spec = SweepSpec("heatmap", tx_counts=(2, 4), rx_counts=(2, 3))
    scn = SMALL.replace(channel="rayleigh")
    serial = format_table(run_sweep(spec, scn, threads=1), timestamp=False)
    parallel = format_table(run_sweep(spec, scn, threads=4), timestamp=False)
    assert serial == parallel


def test_failure_keeps_partial_rows(monkeypatch):
    from tcmimo import experiments

    real = experiments.heatmap

    def flaky(scn, tx, rx, *a, **k):
        if tx[0] == 4:
            raise RuntimeError("boom")
        return real(scn, tx, rx, *a, **k)

    monkeypatch.setattr(experiments, "heatmap", flaky)
    table = run_sweep(SweepSpec("heatmap", tx_counts=(2, 4), rx_counts=(2,)), SMALL)
    assert len(table.rows) == 1
    assert "boom" in table.failure
    text = format_table(table, timestamp=False)
    assert text.rstrip().splitlines()[-1].startswith("# FAILED:")
    assert read_table(io.StringIO(text)).failure == table.failure


def test_timestamp_line():
    text = format_table(Table(("a",), [], []), timestamp=True)
    assert text.startswith("# timestamp = ")
