"""The TSP1 wire envelope.

Layout (big endian):
  magic   "TSP1"  4 bytes
  msg_type u8, flags u8, sequence u32, timestamp_us u64, payload_len u32
  payload  payload_len bytes
  crc32    u32, IEEE, over the 18 header bytes after magic plus the payload

Decode errors are distinct exception types carrying the byte offset of the
problem.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass

MAGIC = b"TSP1"
HEADER = struct.Struct(">4sBBIQI")
CRC = struct.Struct(">I")

MSG_VIDEO_FRAME = 0x01
MSG_DETECTIONS = 0x02
MSG_CONTROL = 0x03
MSG_HEAD_POSE = 0x04
MSG_HEARTBEAT = 0x05
MSG_STATUS = 0x06

KNOWN_TYPES = frozenset(
    {
        MSG_VIDEO_FRAME,
        MSG_DETECTIONS,
        MSG_CONTROL,
        MSG_HEAD_POSE,
        MSG_HEARTBEAT,
        MSG_STATUS,
    }
)

MAX_PAYLOAD = 16 * 1024 * 1024


class EnvelopeError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"offset {offset}: {message}")
        self.offset = offset


class BadMagicError(EnvelopeError):
    pass


class CrcMismatchError(EnvelopeError):
    pass


class UnknownTypeError(EnvelopeError):
    pass


class TruncatedError(EnvelopeError):
    pass


@dataclass(frozen=True)
class Envelope:
    msg_type: int
    payload: bytes
    sequence: int = 0
    timestamp_us: int = 0
    flags: int = 0

    @property
    def wire_size(self) -> int:
        return HEADER.size + len(self.payload) + CRC.size


def encode_envelope(
    msg_type: int,
    payload: bytes,
    sequence: int = 0,
    timestamp_us: int = 0,
    flags: int = 0,
) -> bytes:
    if msg_type not in KNOWN_TYPES:
        raise ValueError(f"unknown message type 0x{msg_type:02X}")
    if len(payload) > MAX_PAYLOAD:
        raise ValueError(f"payload of {len(payload)} bytes exceeds {MAX_PAYLOAD}")
    header = HEADER.pack(
        MAGIC,
        msg_type,
        flags & 0xFF,
        sequence & 0xFFFFFFFF,
        timestamp_us & 0xFFFFFFFFFFFFFFFF,
        len(payload),
    )
    crc = zlib.crc32(header[4:] + payload) & 0xFFFFFFFF
    return header + payload + CRC.pack(crc)


def decode_envelope(data: bytes) -> tuple[Envelope, int]:
    """Decode one envelope from the head of `data`.

    Returns (envelope, bytes consumed). Raises TruncatedError when more
    bytes are needed, with the offset the data ran out at.
    """
    if len(data) < HEADER.size:
        raise TruncatedError(
            f"need {HEADER.size} header bytes, have {len(data)}", len(data)
        )
    magic, msg_type, flags, sequence, timestamp_us, payload_len = HEADER.unpack_from(
        data
    )
    if magic != MAGIC:
        raise BadMagicError(f"magic {magic!r}, expected {MAGIC!r}", 0)
    if msg_type not in KNOWN_TYPES:
        raise UnknownTypeError(f"unknown message type 0x{msg_type:02X}", 4)
    if payload_len > MAX_PAYLOAD:
        raise EnvelopeError(f"payload length {payload_len} exceeds cap", 18)
    total = HEADER.size + payload_len + CRC.size
    if len(data) < total:
        raise TruncatedError(f"need {total} bytes, have {len(data)}", len(data))
    payload = bytes(data[HEADER.size : HEADER.size + payload_len])
    (crc_stored,) = CRC.unpack_from(data, HEADER.size + payload_len)
    crc_actual = zlib.crc32(data[4 : HEADER.size + payload_len]) & 0xFFFFFFFF
    if crc_stored != crc_actual:
        raise CrcMismatchError(
            f"crc 0x{crc_stored:08X}, computed 0x{crc_actual:08X}",
            HEADER.size + payload_len,
        )
    return (
        Envelope(msg_type, payload, sequence, timestamp_us, flags),
        total,
    )


class EnvelopeStream:
    """Incremental decoder for a byte stream of envelopes."""

    def __init__(self) -> None:
        self._buf = bytearray()

    def feed(self, data: bytes) -> list[Envelope]:
        self._buf.extend(data)
        out = []
        while True:
            try:
                env, used = decode_envelope(bytes(self._buf))
            except TruncatedError:
                break
            del self._buf[:used]
            out.append(env)
        return out

    @property
    def pending_bytes(self) -> int:
        return len(self._buf)


class Sequencer:
    """Strictly increasing sequence numbers per (sender, message type)."""

    def __init__(self) -> None:
        self._next: dict[int, int] = {}

    def take(self, msg_type: int) -> int:
        seq = self._next.get(msg_type, 0)
        self._next[msg_type] = (seq + 1) & 0xFFFFFFFF
        return seq
