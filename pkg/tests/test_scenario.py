import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tcmimo.errors import FormatError, ValidationError
from tcmimo.scenario import VALID_KEYS, Scenario, parse_scenario, serialize_scenario

C0 = 299792458.0


def test_defaults():
    s = parse_scenario("")
    assert s == Scenario()
    assert s.tx_count == 16 and s.rx_count == 16
    assert s.tx_spacing == 0.005
    assert s.tx_ratio == pytest.approx(1.9320814273, abs=1e-10)
    assert s.antenna_resistance == 50.0
    assert s.grid_f_min == 100e6 and s.grid_f_max == 30e9
    assert s.power_p_max == 2.0
    assert s.overrides == ()


def test_default_distance_is_far_field():
    assert Scenario().distance == pytest.approx(30 * C0 / 100e6)


def test_power_budget_conventions():
    s = Scenario()
    assert s.power_budget == pytest.approx(4 * 50 * 2)
    assert s.replace(power_convention="resistive").power_budget == pytest.approx(100)
    assert s.power_density == pytest.approx(400 / (30e9 - 100e6))


def test_ratio_below_floor_rejected():
    with pytest.raises(ValidationError):
        parse_scenario("ratio = 1.0")


def test_unknown_key_lists_valid_keys():
    with pytest.raises(FormatError) as info:
        parse_scenario("tx.cuont = 4")
    assert "tx.count" in str(info.value)
    assert "valid keys" in str(info.value)


def test_duplicate_key_rejected():
    with pytest.raises(FormatError):
        parse_scenario("tx.count = 4\ntx.count = 8")
    with pytest.raises(FormatError):
        parse_scenario("ratio = 2.0\ntx.ratio = 2.5")


@pytest.mark.parametrize("text", ["tx.count", "tx.count = four", "tx.count = 2.5", "coupled = maybe", "bands = 1e9-2e9"])
def test_malformed_lines(text):
    with pytest.raises(FormatError):
        parse_scenario(text)


@pytest.mark.parametrize("text", ["tx.count = 0", "mode = XX", "channel = ricean", "grid.f_min = 0", "fe.temperature = -1"])
def test_physical_violations(text):
    with pytest.raises(ValidationError):
        parse_scenario(text)


def test_comments_and_overrides():
    s = parse_scenario("# header\ntx.count = 8   # eight\nratio = 2.5\nlink.distance = auto\n")
    assert s.tx_count == 8
    assert s.tx_ratio == s.rx_ratio == 2.5
    assert s.link_distance is None
    assert s.overrides == ("tx.count", "tx.ratio", "rx.ratio", "link.distance")


def test_stream_and_path(tmp_path):
    path = tmp_path / "s.cfg"
    path.write_text("rx.count = 4\n")
    assert parse_scenario(path).rx_count == 4
    assert parse_scenario(str(path)).rx_count == 4
    assert parse_scenario(io.StringIO("rx.count = 4\n")).rx_count == 4


def test_bands_parse():
    s = parse_scenario("bands = 1e9:2e9, 3e9:4e9")
    assert s.bands == ((1e9, 2e9), (3e9, 4e9))


def test_round_trip_defaults():
    s = Scenario()
    assert parse_scenario(serialize_scenario(s)) == s


@given(
    count=st.integers(1, 64),
    spacing=st.floats(1e-4, 0.1),
    ratio=st.floats(1.34, 10.0),
    orient=st.sampled_from(["colinear", "parallel"]),
    seed=st.integers(0, 2**31),
    p=st.floats(1e-3, 1e3),
    coupled=st.booleans(),
)
def test_round_trip_property(count, spacing, ratio, orient, seed, p, coupled):
    s = Scenario().replace(
        tx_count=count, tx_spacing=spacing, rx_ratio=ratio, rx_orientation=orient, seed=seed, power_p_max=p, coupled=coupled
    )
    back = parse_scenario(serialize_scenario(s))
    assert back == s
    only = parse_scenario(serialize_scenario(s, only_overrides=True))
    assert only == s


def test_valid_keys_cover_every_field():
    assert set(VALID_KEYS) == {k for k, _ in Scenario().items()} | {"ratio"}
