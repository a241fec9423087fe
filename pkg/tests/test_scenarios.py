"""Built-in scenario fixtures: shape, goldens, and reachability oracles."""

import math
from pathlib import Path

import pytest

from sdpcast import (
    BUILTIN_SCENARIOS,
    UnknownScenario,
    in_range,
    scenario_gen,
    scenario_to_json,
)

DATA = Path(__file__).parent / "data"


def test_builtin_names():
    assert set(BUILTIN_SCENARIOS) == {
        "two-device-default",
        "crowd-20",
        "out-of-range",
        "torn-read",
    }


def test_unknown_scenario_rejected():
    with pytest.raises(UnknownScenario):
        scenario_gen("three-device-default")


@pytest.mark.parametrize("name", sorted(BUILTIN_SCENARIOS))
def test_builders_match_committed_goldens(name):
    golden = (DATA / f"{name}.json").read_text(encoding="utf-8")
    assert scenario_to_json(scenario_gen(name)) == golden


@pytest.mark.parametrize("name", sorted(BUILTIN_SCENARIOS))
def test_builders_are_reproducible(name):
    assert scenario_to_json(scenario_gen(name)) == scenario_to_json(scenario_gen(name))


def test_two_device_default_shape():
    sc = scenario_gen("two-device-default")
    assert len(sc.devices) == 2
    a, b = sc.devices
    assert math.dist(a.position, b.position) == 5.0
    assert a.scan_interval_s == b.scan_interval_s == 30.0
    assert in_range(a, b) and in_range(b, a)
    assert sc.timing.inquiry_duration_s == 12.0
    assert sc.timing.fetch_latency_fresh_s == 6.0
    assert sc.timing.fetch_latency_cached_s == 1.5
    # every change leaves at least 60 s of run time to be delivered in
    assert all(m.t <= sc.duration_s - 60.0 for m in sc.schedule)
    assert sc.schedule  # mid-run changes are the point of the fixture


def test_out_of_range_shape():
    sc = scenario_gen("out-of-range")
    a, b = sc.devices
    assert math.dist(a.position, b.position) == 200.0
    assert not in_range(a, b)
    assert not in_range(b, a)


def test_crowd_20_graph_is_complete():
    sc = scenario_gen("crowd-20")
    assert len(sc.devices) == 20
    center_max = max(math.hypot(*d.position) for d in sc.devices)
    assert center_max <= 10.0  # inside a 20 m diameter disc
    for a in sc.devices:
        for b in sc.devices:
            if a is not b:
                assert in_range(a, b)
    assert len({d.address for d in sc.devices}) == 20
    assert len({d.message for d in sc.devices}) == 20


def test_torn_read_shape():
    sc = scenario_gen("torn-read")
    assert sc.torn_read_mode
    advertiser, observer = sc.devices
    assert advertiser.scan_interval_s is None
    assert observer.scan_interval_s == 30.0
    assert sc.timing.fetch_latency_cached_s < sc.timing.fetch_latency_fresh_s
    assert len(sc.schedule) == 1
    change = sc.schedule[0]
    assert change.t == 50.0
    # old generation frames to 7 chunks, new to 6: mixes are detectable
    assert len(advertiser.message) == 82
    assert len(change.message) == 64
