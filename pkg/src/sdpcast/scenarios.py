"""Built-in scenarios, committed as frozen fixtures.

Each builder returns a fully specified Scenario whose JSON form is
byte-for-byte reproducible, so downstream numbers cannot drift silently.
Coordinates are literals, not runtime trigonometry, for the same reason.
"""

from __future__ import annotations

from .errors import UnknownScenario
from .sim import FRAMED, AdvertisementTable, Device, Mutation, Scenario, TimingModel

WELLKNOWN_SPP = "00001101-0000-1000-8000-00805f9b34fb"


def two_device_default() -> Scenario:
    """Two scanners 5 m apart exchanging framed messages, with mid-run changes.

    Worst-case change-to-reassembly under default timing is bounded by
    scan_interval (30) + inquiry (12) + fresh fetch (6) = 48 s, so every
    change lands inside the one-minute envelope on every seed.
    """
    return Scenario(
        name="two-device-default",
        duration_s=300.0,
        seed=0,
        devices=[
            Device(
                address="aa:00:00:00:00:01",
                position=(0.0, 0.0),
                range_m=10.0,
                scan_interval_s=30.0,
                message=b"hello from device a",
                mode=FRAMED,
            ),
            Device(
                address="aa:00:00:00:00:02",
                position=(5.0, 0.0),
                range_m=10.0,
                scan_interval_s=30.0,
                message=b"hello from device b",
                mode=FRAMED,
            ),
        ],
        schedule=[
            Mutation(t=95.0, device="aa:00:00:00:00:01", action="set_message",
                     message=b"device a, second message"),
            Mutation(t=130.0, device="aa:00:00:00:00:02", action="set_message",
                     message=b"device b, second message"),
            Mutation(t=185.0, device="aa:00:00:00:00:01", action="set_message",
                     message=b"device a, third message"),
        ],
    )


def out_of_range() -> Scenario:
    """Two advertisers 200 m apart; the disc model keeps them invisible."""
    return Scenario(
        name="out-of-range",
        duration_s=300.0,
        seed=0,
        devices=[
            Device(
                address="aa:00:00:00:00:01",
                position=(0.0, 0.0),
                range_m=100.0,
                scan_interval_s=30.0,
                message=b"unreachable payload a",
                mode=FRAMED,
            ),
            Device(
                address="aa:00:00:00:00:02",
                position=(200.0, 0.0),
                range_m=100.0,
                scan_interval_s=30.0,
                message=b"unreachable payload b",
                mode=FRAMED,
            ),
        ],
    )


# 20 points on a radius-8 ring inside a 20 m disc; max pairwise distance
# is 16 m, under the shared 20 m range, so the in_range graph is complete.
_CROWD_RING: tuple[tuple[float, float], ...] = (
    (8.0, 0.0), (7.608452, 2.472136), (6.472136, 4.702282), (4.702282, 6.472136),
    (2.472136, 7.608452), (0.0, 8.0), (-2.472136, 7.608452), (-4.702282, 6.472136),
    (-6.472136, 4.702282), (-7.608452, 2.472136), (-8.0, 0.0), (-7.608452, -2.472136),
    (-6.472136, -4.702282), (-4.702282, -6.472136), (-2.472136, -7.608452), (0.0, -8.0),
    (2.472136, -7.608452), (4.702282, -6.472136), (6.472136, -4.702282), (7.608452, -2.472136),
)


def crowd_20() -> Scenario:
    """Twenty mutually reachable devices, each advertising its own message."""
    devices = [
        Device(
            address=f"aa:00:00:00:01:{k:02x}",
            position=_CROWD_RING[k],
            range_m=20.0,
            scan_interval_s=30.0,
            message=f"crowd member {k:02d} says hi".encode(),
            mode=FRAMED,
            table=AdvertisementTable(wellknown_records=[WELLKNOWN_SPP]),
        )
        for k in range(20)
    ]
    return Scenario(name="crowd-20", duration_s=600.0, seed=0, devices=devices)


def torn_read() -> Scenario:
    """A message change guaranteed to land inside one fetch window.

    The observer scans every 30 s; fetch latencies are 26 s fresh and 25 s
    cached.  The round-1 fetch starts in [30, 42) and completes in [55, 67),
    so the change at t=50 falls strictly inside that window on every seed:
    the snapshot mixes a 7-chunk generation with a 6-chunk one, which the
    framing checks must reject.  Rounds 0 and 2 read clean generations.
    """
    old_message = b"old generation: " + b"x" * 66  # 82 octets -> 7 chunks
    new_message = b"new generation: " + b"y" * 48  # 64 octets -> 6 chunks
    return Scenario(
        name="torn-read",
        duration_s=150.0,
        seed=0,
        torn_read_mode=True,
        timing=TimingModel(
            inquiry_duration_s=12.0,
            fetch_latency_fresh_s=26.0,
            fetch_latency_cached_s=25.0,
        ),
        devices=[
            Device(
                address="aa:00:00:00:00:01",
                position=(0.0, 0.0),
                range_m=10.0,
                scan_interval_s=None,
                message=old_message,
                mode=FRAMED,
            ),
            Device(
                address="aa:00:00:00:00:02",
                position=(5.0, 0.0),
                range_m=10.0,
                scan_interval_s=30.0,
            ),
        ],
        schedule=[
            Mutation(t=50.0, device="aa:00:00:00:00:01", action="set_message",
                     message=new_message),
        ],
    )


BUILTIN_SCENARIOS = {
    "two-device-default": two_device_default,
    "crowd-20": crowd_20,
    "out-of-range": out_of_range,
    "torn-read": torn_read,
}


def scenario_gen(name: str) -> Scenario:
    """Build a named built-in scenario; raises UnknownScenario otherwise."""
    try:
        builder = BUILTIN_SCENARIOS[name]
    except KeyError:
        known = ", ".join(sorted(BUILTIN_SCENARIOS))
        raise UnknownScenario(f"unknown scenario {name!r}; built-ins are: {known}") from None
    return builder()
