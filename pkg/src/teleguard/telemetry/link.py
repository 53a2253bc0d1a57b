"""Checksummed byte framing for the head-tracking link.

Frame layout: start byte 0x7E, big-endian 16-bit payload length, payload,
then a one-byte complement checksum 0xFF - (sum of payload bytes mod 256).
A frame verifies iff (payload sum + checksum) mod 256 == 0xFF.
"""

from __future__ import annotations

import struct
from typing import Iterator

from .imu import HeadPose

START_BYTE = 0x7E
HEAD_POSE_TYPE = 0x10
MAX_PAYLOAD = 0xFFFF


class LinkFrameError(ValueError):
    pass


class BadStartByteError(LinkFrameError):
    pass


class TruncatedFrameError(LinkFrameError):
    pass


class ChecksumMismatchError(LinkFrameError):
    pass


def checksum(payload: bytes) -> int:
    return 0xFF - (sum(payload) & 0xFF)


def encode_link_frame(payload: bytes) -> bytes:
    if len(payload) > MAX_PAYLOAD:
        raise ValueError(f"payload too long: {len(payload)} > {MAX_PAYLOAD}")
    return bytes([START_BYTE]) + struct.pack(">H", len(payload)) + payload + bytes(
        [checksum(payload)]
    )


def decode_link_frame(frame: bytes) -> bytes:
    """Decode exactly one frame; trailing bytes are an error."""
    if len(frame) < 4:
        raise TruncatedFrameError(f"frame of {len(frame)} bytes, need at least 4")
    if frame[0] != START_BYTE:
        raise BadStartByteError(f"start byte 0x{frame[0]:02X}, expected 0x7E")
    (length,) = struct.unpack(">H", frame[1:3])
    if len(frame) != 4 + length:
        raise TruncatedFrameError(
            f"frame is {len(frame)} bytes, length field wants {4 + length}"
        )
    payload = frame[3 : 3 + length]
    if (sum(payload) + frame[3 + length]) & 0xFF != 0xFF:
        raise ChecksumMismatchError("payload checksum mismatch")
    return payload


def iter_link_frames(stream: bytes) -> Iterator[bytes]:
    """Split a replay byte stream of concatenated frames into payloads."""
    pos = 0
    while pos < len(stream):
        if stream[pos] != START_BYTE:
            raise BadStartByteError(f"offset {pos}: start byte 0x{stream[pos]:02X}")
        if pos + 3 > len(stream):
            raise TruncatedFrameError(f"offset {pos}: header cut short")
        (length,) = struct.unpack(">H", stream[pos + 1 : pos + 3])
        end = pos + 4 + length
        if end > len(stream):
            raise TruncatedFrameError(f"offset {pos}: frame cut short")
        yield decode_link_frame(stream[pos:end])
        pos = end


def head_pose_payload(pose: HeadPose, seq: int) -> bytes:
    """Type byte 0x10, pitch/yaw as signed 16-bit centidegrees (big endian),
    then a u32 sequence number."""
    pitch_cd = int(round(pose.pitch * 100.0))
    yaw_cd = int(round(pose.yaw * 100.0))
    return struct.pack(">BhhI", HEAD_POSE_TYPE, pitch_cd, yaw_cd, seq & 0xFFFFFFFF)


def parse_head_pose(payload: bytes) -> tuple[HeadPose, int]:
    if len(payload) != 9:
        raise LinkFrameError(f"head-pose payload is {len(payload)} bytes, expected 9")
    type_byte, pitch_cd, yaw_cd, seq = struct.unpack(">BhhI", payload)
    if type_byte != HEAD_POSE_TYPE:
        raise LinkFrameError(f"unknown payload type 0x{type_byte:02X}")
    return HeadPose(pitch_cd / 100.0, yaw_cd / 100.0), seq
