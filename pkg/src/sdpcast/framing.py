"""Split messages across advertisement slots and reassemble unordered chunk sets.

Service discovery enumerates records in no particular order, so framed mode
spends the first payload octet of every chunk on a header (index in the high
nibble, chunk count in the low nibble) and the first two body octets of chunk
0 on a big-endian message length.  With the default 7 slots that leaves
7*12 - 2 = 82 octets of framed capacity, against the raw per-slot ceilings of
13 octets per UUID, 91 octets outbound and 273 octets per inbound fetch.

There is no message id or checksum: a snapshot torn across a message change
is detected only when the resulting chunk set is inconsistent (missing
indices, mixed totals, or conflicting duplicates).  Two generations with the
same chunk count reassemble silently into mixed bytes; see the tests that
document this limitation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .codec import DEFAULT_CONFIG, PAYLOAD_OCTETS, CodecConfig, PayloadUuid, detect, encode
from .errors import (
    ConflictingDuplicate,
    IncompleteSet,
    InconsistentTotals,
    MalformedUuid,
    MessageTooLong,
)

CHUNK_BODY_OCTETS = 12     # payload octets per chunk after the header
LENGTH_PREFIX_OCTETS = 2   # leading octets of chunk 0, big-endian message length
MAX_CHUNKS = 15            # header packs the total into one nibble


class FrameHeader(NamedTuple):
    """Chunk position within a frame, packed into one octet."""

    index: int
    total: int

    def pack(self) -> int:
        if not 1 <= self.total <= MAX_CHUNKS:
            raise ValueError(f"total {self.total} does not fit in a nibble")
        if not 0 <= self.index < self.total:
            raise ValueError(f"index {self.index} out of range for total {self.total}")
        return (self.index << 4) | self.total

    @classmethod
    def unpack(cls, octet: int) -> FrameHeader:
        return cls(index=octet >> 4, total=octet & 0x0F)

    @property
    def valid(self) -> bool:
        return self.total >= 1 and 0 <= self.index < self.total


@dataclass(frozen=True)
class CapacityLimits:
    """Slot and record budgets observed on the measured Android stack."""

    max_outbound_slots: int = 7
    max_inbound_records: int = 21
    payload_per_uuid: int = PAYLOAD_OCTETS

    def __post_init__(self) -> None:
        if not 1 <= self.max_outbound_slots <= MAX_CHUNKS:
            raise ValueError(
                f"max_outbound_slots must be 1..{MAX_CHUNKS}, got {self.max_outbound_slots}"
            )
        if self.max_inbound_records < 1:
            raise ValueError("max_inbound_records must be positive")
        if self.payload_per_uuid != PAYLOAD_OCTETS:
            raise ValueError(f"payload_per_uuid is fixed at {PAYLOAD_OCTETS} by the UUID layout")

    @property
    def outbound_ceiling(self) -> int:
        """Raw outbound octets: 7 * 13 = 91 with defaults."""
        return self.max_outbound_slots * self.payload_per_uuid

    @property
    def inbound_ceiling(self) -> int:
        """Octets decodable from one fetch: 21 * 13 = 273 with defaults."""
        return self.max_inbound_records * self.payload_per_uuid

    @property
    def framed_capacity(self) -> int:
        """Framed message octets: 7 * 12 - 2 = 82 with defaults."""
        return self.max_outbound_slots * CHUNK_BODY_OCTETS - LENGTH_PREFIX_OCTETS


DEFAULT_LIMITS = CapacityLimits()


def frame(
    message: bytes,
    limits: CapacityLimits = DEFAULT_LIMITS,
    codec: CodecConfig = DEFAULT_CONFIG,
) -> list[PayloadUuid]:
    """Split a message into headered, length-prefixed chunks, one UUID each.

    Emits max(1, ceil((len+2)/12)) UUIDs; the final chunk is zero-padded.
    """
    message = bytes(message)
    if len(message) > limits.framed_capacity:
        raise MessageTooLong(
            f"message is {len(message)} octets, framed capacity is {limits.framed_capacity}"
        )
    body = len(message).to_bytes(LENGTH_PREFIX_OCTETS, "big") + message
    total = math.ceil(len(body) / CHUNK_BODY_OCTETS)
    uuids = []
    for index in range(total):
        chunk = body[index * CHUNK_BODY_OCTETS:(index + 1) * CHUNK_BODY_OCTETS]
        chunk = chunk.ljust(CHUNK_BODY_OCTETS, b"\x00")
        header = FrameHeader(index, total).pack()
        uuids.append(encode(bytes([header]) + chunk, codec))
    return uuids


def unframe(
    uuids: Iterable[str | PayloadUuid],
    codec: CodecConfig = DEFAULT_CONFIG,
) -> bytes:
    """Reassemble a message from an unordered batch of UUID strings.

    Non-payload records, unparsable strings and payloads without a plausible
    chunk header are ignored; duplicates with identical bodies are accepted.
    Raises ConflictingDuplicate, InconsistentTotals or IncompleteSet when the
    surviving chunks do not form exactly one complete frame.
    """
    chunks: dict[int, bytes] = {}
    conflicts: set[int] = set()
    totals: set[int] = set()
    for u in uuids:
        try:
            payload = detect(u, codec)
        except MalformedUuid:
            continue
        if payload is None:
            continue
        header = FrameHeader.unpack(payload[0])
        if not header.valid:
            continue
        body = payload[1:]
        if header.index in chunks and chunks[header.index] != body:
            conflicts.add(header.index)
        chunks[header.index] = body
        totals.add(header.total)

    if conflicts:
        raise ConflictingDuplicate(
            f"conflicting bodies for chunk indices {sorted(conflicts)}"
        )
    if len(totals) > 1:
        raise InconsistentTotals(f"mixed chunk totals {sorted(totals)}")
    if not chunks:
        raise IncompleteSet("no frame chunks found")
    total = totals.pop()
    missing = sorted(set(range(total)) - chunks.keys())
    if missing:
        raise IncompleteSet(f"missing chunk indices {missing} of {total}")

    body = b"".join(chunks[i] for i in range(total))
    declared = int.from_bytes(body[:LENGTH_PREFIX_OCTETS], "big")
    if math.ceil((declared + LENGTH_PREFIX_OCTETS) / CHUNK_BODY_OCTETS) != total:
        raise InconsistentTotals(
            f"declared length {declared} inconsistent with {total} chunks"
        )
    return body[LENGTH_PREFIX_OCTETS:LENGTH_PREFIX_OCTETS + declared]


def raw_slot(message: bytes, codec: CodecConfig = DEFAULT_CONFIG) -> PayloadUuid:
    """One headerless slot carrying up to 13 octets, zero-padded."""
    message = bytes(message)
    if len(message) > PAYLOAD_OCTETS:
        raise MessageTooLong(
            f"message is {len(message)} octets, a raw slot holds {PAYLOAD_OCTETS}"
        )
    return encode(message.ljust(PAYLOAD_OCTETS, b"\x00"), codec)


def raw_read(
    uuids: Iterable[str | PayloadUuid],
    codec: CodecConfig = DEFAULT_CONFIG,
) -> list[bytes]:
    """All 13-octet payloads detected in a batch, in input order."""
    payloads = []
    for u in uuids:
        try:
            payload = detect(u, codec)
        except MalformedUuid:
            continue
        if payload is not None:
            payloads.append(payload)
    return payloads
