"""Aggregation of event logs into latency and bandwidth reports.

Latency matches each MessageChanged to the first MessageReassembled that
carries the same generation, per observer.  Bandwidth counts advertised
octets per device and decoded octets per fetch against the 91/273 octet
ceilings.  The decode totals are computed twice, once from PayloadDecoded
events and once by re-detecting the records carried in UuidsFetched
events, so a decoder that invents or drops octets cannot go unnoticed.
"""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass
from typing import Iterable

from .codec import DEFAULT_CONFIG, detect
from .errors import MalformedLog, MalformedUuid
from .framing import DEFAULT_LIMITS, CapacityLimits
from .sim import (
    DEVICE_FOUND,
    MESSAGE_CHANGED,
    MESSAGE_REASSEMBLED,
    PAYLOAD_DECODED,
    SCAN_STARTED,
    UUIDS_FETCHED,
    SimEvent,
)

DELIVERY_THRESHOLD_S = 60.0


@dataclass(frozen=True)
class PairLatency:
    """Delivery figures for one (observer, subject) pair."""

    observer: str
    subject: str
    first_discovery_s: float | None
    latencies: tuple[float, ...]

    @property
    def min_s(self) -> float | None:
        return min(self.latencies) if self.latencies else None

    @property
    def median_s(self) -> float | None:
        return statistics.median(self.latencies) if self.latencies else None

    @property
    def max_s(self) -> float | None:
        return max(self.latencies) if self.latencies else None


@dataclass(frozen=True)
class LatencyReport:
    """Per-pair latencies plus the delivered-within-threshold aggregate.

    An opportunity is one (message change, scanning observer) pair; the
    aggregate fraction counts opportunities delivered within threshold_s.
    """

    pairs: tuple[PairLatency, ...]
    threshold_s: float
    changes_total: int
    changes_delivered: int
    changes_within_threshold: int

    @property
    def fraction_within(self) -> float:
        if self.changes_total == 0:
            return 1.0
        return self.changes_within_threshold / self.changes_total


@dataclass(frozen=True)
class DeviceBandwidth:
    """Outbound usage of one advertiser at its latest generation."""

    device: str
    slots: int
    advertised_octets: int
    utilization: float


@dataclass(frozen=True)
class FetchBandwidth:
    """Inbound usage of one completed fetch."""

    t: float
    observer: str
    subject: str
    records: int
    payload_records: int
    decoded_octets: int
    utilization: float


@dataclass(frozen=True)
class BandwidthReport:
    devices: tuple[DeviceBandwidth, ...]
    fetches: tuple[FetchBandwidth, ...]
    outbound_ceiling: int
    inbound_ceiling: int
    decoded_total_octets: int
    fetched_payload_octets: int

    @property
    def conserved(self) -> bool:
        return self.decoded_total_octets == self.fetched_payload_octets


@dataclass(frozen=True)
class Report:
    latency: LatencyReport
    bandwidth: BandwidthReport


def load_log(lines: Iterable[str]) -> list[SimEvent]:
    """Parse a line-delimited event log; raises MalformedLog with a line number."""
    events: list[SimEvent] = []
    last_t = None
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
            event = SimEvent.from_dict(obj)
        except (ValueError, TypeError, KeyError) as exc:
            raise MalformedLog(f"line {lineno}: {exc}") from None
        if last_t is not None and event.t < last_t:
            raise MalformedLog(f"line {lineno}: timestamp decreases ({event.t} after {last_t})")
        last_t = event.t
        events.append(event)
    return events


def build_report(
    events: Iterable[SimEvent],
    threshold_s: float = DELIVERY_THRESHOLD_S,
    limits: CapacityLimits = DEFAULT_LIMITS,
) -> Report:
    """Aggregate a run's events; pure and deterministic for a given log."""
    scanners: set[str] = set()
    change_t: dict[tuple[str, int], float] = {}
    latest_slots: dict[str, int] = {}
    first_found: dict[tuple[str, str], float] = {}
    first_reassembly: dict[tuple[str, str, int], float] = {}
    decoded_total = 0
    fetched_payload = 0
    fetches: list[FetchBandwidth] = []

    for event in events:
        if event.kind == SCAN_STARTED:
            scanners.add(event.observer)
        elif event.kind == MESSAGE_CHANGED:
            generation = int(event.detail["generation"])
            change_t[(event.subject, generation)] = event.t
            latest_slots[event.subject] = int(event.detail["slots"])
        elif event.kind == DEVICE_FOUND:
            first_found.setdefault((event.observer, event.subject), event.t)
        elif event.kind == UUIDS_FETCHED:
            records = event.detail["records"]
            payload_octets = 0
            payload_records = 0
            for record in records:
                try:
                    payload = detect(record, DEFAULT_CONFIG)
                except MalformedUuid:
                    continue
                if payload is not None:
                    payload_records += 1
                    payload_octets += len(payload)
            fetched_payload += payload_octets
            fetches.append(
                FetchBandwidth(
                    t=event.t,
                    observer=event.observer,
                    subject=event.subject,
                    records=len(records),
                    payload_records=payload_records,
                    decoded_octets=payload_octets,
                    utilization=payload_octets / limits.inbound_ceiling,
                )
            )
        elif event.kind == PAYLOAD_DECODED:
            decoded_total += len(bytes.fromhex(event.detail["payload"]))
        elif event.kind == MESSAGE_REASSEMBLED:
            generation = int(event.detail["generation"])
            key = (event.observer, event.subject, generation)
            first_reassembly.setdefault(key, event.t)

    pair_latencies: dict[tuple[str, str], list[tuple[int, float]]] = {}
    for (observer, subject, generation), t in first_reassembly.items():
        try:
            changed_at = change_t[(subject, generation)]
        except KeyError:
            raise MalformedLog(
                f"MessageReassembled references unknown generation {generation} of {subject}"
            ) from None
        pair_latencies.setdefault((observer, subject), []).append((generation, t - changed_at))

    pair_keys = sorted(set(first_found) | set(pair_latencies))
    pairs = []
    for key in pair_keys:
        by_generation = sorted(pair_latencies.get(key, []))
        pairs.append(
            PairLatency(
                observer=key[0],
                subject=key[1],
                first_discovery_s=first_found.get(key),
                latencies=tuple(latency for _, latency in by_generation),
            )
        )

    changes_total = sum(
        len(scanners - {subject}) for (subject, _generation) in change_t
    )
    changes_delivered = len(first_reassembly)
    changes_within = sum(
        1
        for (observer, subject, generation), t in first_reassembly.items()
        if t - change_t[(subject, generation)] <= threshold_s
    )

    devices = tuple(
        DeviceBandwidth(
            device=device,
            slots=slots,
            advertised_octets=slots * limits.payload_per_uuid,
            utilization=slots * limits.payload_per_uuid / limits.outbound_ceiling,
        )
        for device, slots in sorted(latest_slots.items())
    )

    return Report(
        latency=LatencyReport(
            pairs=tuple(pairs),
            threshold_s=threshold_s,
            changes_total=changes_total,
            changes_delivered=changes_delivered,
            changes_within_threshold=changes_within,
        ),
        bandwidth=BandwidthReport(
            devices=devices,
            fetches=tuple(fetches),
            outbound_ceiling=limits.outbound_ceiling,
            inbound_ceiling=limits.inbound_ceiling,
            decoded_total_octets=decoded_total,
            fetched_payload_octets=fetched_payload,
        ),
    )


def _fmt_s(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.2f}"


def format_text(report: Report) -> str:
    """Human-readable summary."""
    lat, bw = report.latency, report.bandwidth
    out = ["latency"]
    if not lat.pairs:
        out.append("  no pairs observed")
    for pair in lat.pairs:
        out.append(
            f"  {pair.observer} <- {pair.subject}: first discovery {_fmt_s(pair.first_discovery_s)} s; "
            f"{len(pair.latencies)} deliveries, min/median/max "
            f"{_fmt_s(pair.min_s)}/{_fmt_s(pair.median_s)}/{_fmt_s(pair.max_s)} s"
        )
    out.append(
        f"  changes: {lat.changes_total} opportunities, {lat.changes_delivered} delivered, "
        f"{lat.changes_within_threshold} within {lat.threshold_s:.0f} s "
        f"(fraction {lat.fraction_within:.2f})"
    )
    out.append("bandwidth")
    if not bw.devices:
        out.append("  no advertisers observed")
    for dev in bw.devices:
        out.append(
            f"  {dev.device}: {dev.slots} slots, {dev.advertised_octets} octets advertised "
            f"({100 * dev.utilization:.1f}% of {bw.outbound_ceiling})"
        )
    max_decoded = max((f.decoded_octets for f in bw.fetches), default=0)
    out.append(
        f"  fetches: {len(bw.fetches)}; max decoded {max_decoded} octets "
        f"(ceiling {bw.inbound_ceiling})"
    )
    out.append(
        f"  conservation: decoded {bw.decoded_total_octets} octets, "
        f"fetched {bw.fetched_payload_octets} octets "
        f"({'ok' if bw.conserved else 'MISMATCH'})"
    )
    return "\n".join(out) + "\n"


def format_lines(report: Report) -> str:
    """One JSON record per metric, for streaming consumers."""
    lat, bw = report.latency, report.bandwidth
    rows: list[dict] = []
    for pair in lat.pairs:
        rows.append(
            {
                "metric": "pair",
                "observer": pair.observer,
                "subject": pair.subject,
                "first_discovery_s": pair.first_discovery_s,
                "deliveries": len(pair.latencies),
                "min_s": pair.min_s,
                "median_s": pair.median_s,
                "max_s": pair.max_s,
            }
        )
    rows.append(
        {
            "metric": "changes",
            "total": lat.changes_total,
            "delivered": lat.changes_delivered,
            "within_threshold": lat.changes_within_threshold,
            "threshold_s": lat.threshold_s,
            "fraction": lat.fraction_within,
        }
    )
    for dev in bw.devices:
        rows.append(
            {
                "metric": "device",
                "device": dev.device,
                "slots": dev.slots,
                "advertised_octets": dev.advertised_octets,
                "utilization": dev.utilization,
            }
        )
    for fetch in bw.fetches:
        rows.append(
            {
                "metric": "fetch",
                "t": fetch.t,
                "observer": fetch.observer,
                "subject": fetch.subject,
                "records": fetch.records,
                "payload_records": fetch.payload_records,
                "decoded_octets": fetch.decoded_octets,
                "utilization": fetch.utilization,
            }
        )
    rows.append(
        {
            "metric": "conservation",
            "decoded_octets": bw.decoded_total_octets,
            "fetched_payload_octets": bw.fetched_payload_octets,
            "conserved": bw.conserved,
        }
    )
    return "\n".join(json.dumps(row, separators=(",", ":")) for row in rows) + "\n"
