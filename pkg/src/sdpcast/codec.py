"""Encode 13-octet payloads into v4-shaped service UUIDs and extract them back.

A payload UUID looks like a random version-4 UUID to any Bluetooth stack, but
its 26 free hex digits carry application data and its last 4 digits carry a
fixed marker that distinguishes it from ordinary service records:

    d0..d7 - d8..d11 - 4 d12..d14 - 8 d15..d17 - d18..d25 MARKER

where d0..d25 is the big-endian hex expansion of the 13 payload octets.  The
version nibble is pinned to ``4`` and the variant nibble to ``8``, so every
emitted UUID is a plausible RFC 4122 v4 identifier.

A genuinely random v4 UUID with variant ``8`` matches the marker with
probability 2**-16; callers who care can pick their own marker.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass

from .errors import (
    InvalidMarker,
    MalformedUuid,
    NotAPayloadUuid,
    PayloadTooLong,
    PayloadTooShort,
)

PAYLOAD_OCTETS = 13
DEFAULT_MARKER = "c0de"

_UUID_SHAPE = re.compile(
    r"[0-9a-f]{8}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{12}"
)
_MARKER_SHAPE = re.compile(r"[0-9a-f]{4}")

# Offsets into the 32-digit hyphenless form.
_VERSION_NIBBLE = 12
_VARIANT_NIBBLE = 16
_RFC4122_VARIANTS = "89ab"


@dataclass(frozen=True)
class CodecConfig:
    """Marker and padding behaviour for one codec instance.

    In text mode, short input is zero-padded up to 13 octets on encode and
    trailing zero octets are stripped on decode; this mirrors string-oriented
    use but silently truncates binary payloads with meaningful trailing
    zeros.  Raw mode (the default) requires exactly 13 octets and preserves
    them bit-exactly.
    """

    marker: str = DEFAULT_MARKER
    text_mode: bool = False

    def __post_init__(self) -> None:
        marker = self.marker.lower()
        if not _MARKER_SHAPE.fullmatch(marker):
            raise InvalidMarker(f"marker must be 4 hex digits, got {self.marker!r}")
        object.__setattr__(self, "marker", marker)


DEFAULT_CONFIG = CodecConfig()


@dataclass(frozen=True)
class PayloadUuid:
    """A payload-bearing UUID in canonical lowercase 8-4-4-4-12 form."""

    canonical: str

    def __post_init__(self) -> None:
        digits = _hex32(self.canonical)
        if self.canonical != self.canonical.lower():
            raise MalformedUuid(f"canonical form must be lowercase: {self.canonical!r}")
        if digits[_VERSION_NIBBLE] != "4":
            raise MalformedUuid(f"version nibble is not 4: {self.canonical!r}")
        if digits[_VARIANT_NIBBLE] != "8":
            raise MalformedUuid(f"variant nibble is not 8: {self.canonical!r}")

    @classmethod
    def from_raw(cls, raw: bytes) -> PayloadUuid:
        """Build from the 16-octet binary form."""
        if len(raw) != 16:
            raise MalformedUuid(f"raw UUID must be 16 octets, got {len(raw)}")
        h = raw.hex()
        return cls(f"{h[0:8]}-{h[8:12]}-{h[12:16]}-{h[16:20]}-{h[20:32]}")

    @property
    def raw(self) -> bytes:
        """The 16-octet binary form; round-trips losslessly with canonical."""
        return bytes.fromhex(self.canonical.replace("-", ""))

    @property
    def marker(self) -> str:
        """The trailing 4 hex digits."""
        return self.canonical[-4:]

    def __str__(self) -> str:
        return self.canonical


def _hex32(uuid_str: str) -> str:
    """Lowercase 32-digit form of a UUID string, or raise MalformedUuid."""
    s = str(uuid_str).lower()
    if not _UUID_SHAPE.fullmatch(s):
        raise MalformedUuid(f"not a valid UUID string: {uuid_str!r}")
    return s.replace("-", "")


def encode(payload: bytes, config: CodecConfig = DEFAULT_CONFIG) -> PayloadUuid:
    """Encode a 13-octet payload into a marker-tagged v4-shaped UUID.

    Text mode zero-pads shorter input; raw mode requires exactly 13 octets.
    """
    payload = bytes(payload)
    if len(payload) > PAYLOAD_OCTETS:
        raise PayloadTooLong(
            f"payload is {len(payload)} octets, capacity is {PAYLOAD_OCTETS}"
        )
    if len(payload) < PAYLOAD_OCTETS:
        if not config.text_mode:
            raise PayloadTooShort(
                f"raw mode needs exactly {PAYLOAD_OCTETS} octets, got {len(payload)}"
            )
        payload = payload.ljust(PAYLOAD_OCTETS, b"\x00")
    d = payload.hex()
    return PayloadUuid(
        f"{d[0:8]}-{d[8:12]}-4{d[12:15]}-8{d[15:18]}-{d[18:26]}{config.marker}"
    )


def detect(uuid_str: str | PayloadUuid, config: CodecConfig = DEFAULT_CONFIG) -> bytes | None:
    """Extract the 13 payload octets from a UUID string, or None.

    Returns the payload iff the version nibble is 4, the variant nibble is 8
    and the trailing 4 digits equal the configured marker.  Matching is
    case-insensitive; raises MalformedUuid for non-UUID input.
    """
    digits = _hex32(str(uuid_str))
    if digits[_VERSION_NIBBLE] != "4":
        return None
    if digits[_VARIANT_NIBBLE] != "8":
        return None
    if digits[28:32] != config.marker:
        return None
    # Direct nibble-to-octet mapping: leading zeros survive.
    data = digits[0:12] + digits[13:16] + digits[17:20] + digits[20:28]
    return bytes.fromhex(data)


def decode(uuid_str: str | PayloadUuid, config: CodecConfig = DEFAULT_CONFIG) -> bytes:
    """Payload octets of a payload UUID: all 13 in raw mode, zero-stripped in text mode."""
    payload = detect(uuid_str, config)
    if payload is None:
        raise NotAPayloadUuid(f"no payload in {uuid_str!s}")
    if config.text_mode:
        return payload.rstrip(b"\x00")
    return payload


def is_well_formed_v4(uuid_str: str) -> bool:
    """True iff the string parses as a v4 UUID with an RFC 4122 variant nibble."""
    try:
        digits = _hex32(uuid_str)
    except MalformedUuid:
        return False
    return digits[_VERSION_NIBBLE] == "4" and digits[_VARIANT_NIBBLE] in _RFC4122_VARIANTS


def printable_text(payload: bytes) -> str | None:
    """The payload as text when every octet is printable ASCII, else None."""
    try:
        text = payload.decode("ascii")
    except UnicodeDecodeError:
        return None
    if text and all(c in string.printable and c not in "\x0b\x0c" for c in text):
        return text
    return None
