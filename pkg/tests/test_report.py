"""Report aggregation tests."""

import json

import pytest

from sdpcast import (
    RAW,
    Device,
    MalformedLog,
    Scenario,
    build_report,
    format_lines,
    format_text,
    load_log,
    run,
    scenario_gen,
)

A = "aa:00:00:00:00:01"
B = "aa:00:00:00:00:02"


def _two_device_log(seed=0):
    return run(scenario_gen("two-device-default"), seed=seed)


def test_empty_log_empty_report():
    report = build_report([])
    assert report.latency.pairs == ()
    assert report.latency.changes_total == 0
    assert report.latency.fraction_within == 1.0
    assert report.bandwidth.devices == ()
    assert report.bandwidth.fetches == ()
    assert report.bandwidth.conserved


def test_two_device_fraction_is_one():
    report = build_report(_two_device_log())
    lat = report.latency
    assert lat.changes_total == 5  # 2 initial + 3 scheduled, one observer each
    assert lat.changes_delivered == 5
    assert lat.changes_within_threshold == 5
    assert lat.fraction_within == 1.0


def test_latencies_nonnegative_and_bounded():
    for seed in (0, 5, 9):
        report = build_report(_two_device_log(seed))
        for pair in report.latency.pairs:
            assert pair.first_discovery_s is not None
            for latency in pair.latencies:
                assert 0.0 <= latency <= 300.0
            assert pair.min_s <= pair.median_s <= pair.max_s


def test_raw_seven_slot_advertiser_bandwidth():
    sc = Scenario(
        devices=[
            Device(address=A, scan_interval_s=None, message=b"r" * 91, mode=RAW),
            Device(address=B, position=(5.0, 0.0)),
        ],
        duration_s=60.0,
    )
    report = build_report(run(sc, seed=4))
    (dev,) = report.bandwidth.devices
    assert dev.device == A
    assert dev.slots == 7
    assert dev.advertised_octets == 91
    assert dev.utilization == 1.0
    assert report.bandwidth.fetches
    for fetch in report.bandwidth.fetches:
        assert fetch.payload_records == 7
        assert fetch.decoded_octets == 91
    reassembled = [e for e in run(sc, seed=4) if e.kind == "MessageReassembled"]
    assert reassembled
    payloads = reassembled[0].detail["payloads"]
    assert b"".join(bytes.fromhex(p) for p in sorted(payloads)) != b""


def test_ceilings_respected_on_crowd():
    report = build_report(run(scenario_gen("crowd-20"), seed=2))
    for dev in report.bandwidth.devices:
        assert dev.advertised_octets <= report.bandwidth.outbound_ceiling == 91
    for fetch in report.bandwidth.fetches:
        assert fetch.decoded_octets <= report.bandwidth.inbound_ceiling == 273
        assert fetch.records <= 21


def test_conservation_on_builtins():
    for name in ("two-device-default", "crowd-20", "torn-read"):
        report = build_report(run(scenario_gen(name), seed=6))
        assert report.bandwidth.conserved
        assert report.bandwidth.decoded_total_octets > 0


def test_out_of_range_zero_deliveries():
    report = build_report(run(scenario_gen("out-of-range"), seed=1))
    assert report.latency.changes_total == 2
    assert report.latency.changes_delivered == 0
    assert report.latency.fraction_within == 0.0
    assert report.latency.pairs == ()
    assert report.bandwidth.fetches == ()


def test_report_is_deterministic():
    log = _two_device_log(7)
    assert build_report(log) == build_report(log)


def test_load_log_round_trip():
    log = _two_device_log(3)
    lines = [e.to_json() + "\n" for e in log]
    assert load_log(lines) == log


def test_load_log_skips_blank_lines():
    log = _two_device_log(3)
    lines = [e.to_json() + "\n" for e in log[:3]]
    lines.insert(1, "\n")
    assert load_log(lines) == log[:3]


def test_load_log_reports_line_numbers():
    log = _two_device_log(3)
    lines = [e.to_json() for e in log[:3]]
    lines[1] = "{broken"
    with pytest.raises(MalformedLog, match="line 2"):
        load_log(lines)


def test_load_log_rejects_unknown_kind():
    line = json.dumps(
        {"t": 0.0, "kind": "Mystery", "observer": A, "subject": A, "detail": {}}
    )
    with pytest.raises(MalformedLog, match="line 1"):
        load_log([line])


def test_load_log_rejects_missing_fields():
    with pytest.raises(MalformedLog, match="line 1"):
        load_log([json.dumps({"t": 0.0, "kind": "ScanStarted"})])


def test_load_log_rejects_decreasing_time():
    log = _two_device_log(3)
    lines = [e.to_json() for e in log[:5]]
    lines.append(lines[0])  # t jumps back to 0
    with pytest.raises(MalformedLog, match="decreases"):
        load_log(lines)


def test_unknown_generation_rejected():
    lines = [
        json.dumps(
            {
                "t": 1.0,
                "kind": "MessageReassembled",
                "observer": B,
                "subject": A,
                "detail": {"generation": 9, "mode": "framed", "message": ""},
            }
        )
    ]
    with pytest.raises(MalformedLog, match="generation"):
        build_report(load_log(lines))


def test_format_text_smoke():
    text = format_text(build_report(_two_device_log()))
    assert "latency" in text
    assert "bandwidth" in text
    assert "fraction 1.00" in text
    assert "(ok)" in text


def test_format_text_empty():
    text = format_text(build_report([]))
    assert "no pairs observed" in text
    assert "no advertisers observed" in text


def test_format_lines_parses_and_covers_metrics():
    out = format_lines(build_report(_two_device_log()))
    rows = [json.loads(line) for line in out.strip().split("\n")]
    metrics = {row["metric"] for row in rows}
    assert metrics == {"pair", "changes", "device", "fetch", "conservation"}
    (changes,) = [r for r in rows if r["metric"] == "changes"]
    assert changes["fraction"] == 1.0
    (conservation,) = [r for r in rows if r["metric"] == "conservation"]
    assert conservation["conserved"] is True
