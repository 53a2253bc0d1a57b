"""Typed payloads carried inside TSP1 envelopes."""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from ..telemetry.imu import HeadPose
from ..telemetry.link import head_pose_payload, parse_head_pose
from .envelope import (
    MSG_CONTROL,
    MSG_DETECTIONS,
    MSG_HEAD_POSE,
    MSG_HEARTBEAT,
    MSG_STATUS,
    MSG_VIDEO_FRAME,
    Envelope,
)

FMT_GRAY8 = 0x01
FMT_RGB8 = 0x02
FMT_GRAY8_RLE = 0x11
FMT_RGB8_RLE = 0x12

CTRL_MODE_SWITCH = 0x01
CTRL_DRIVE = 0x02
CTRL_E_STOP = 0x03

MODE_UGV = 0
MODE_UAV = 1

COLOR_CODE = {"GREEN": 0, "RED": 1, "UNKNOWN": 2}
COLOR_NAME = {v: k for k, v in COLOR_CODE.items()}


class MessageError(ValueError):
    pass


@dataclass(frozen=True)
class VideoFrame:
    image: np.ndarray  # (h, w) gray or (h, w, 3) rgb

    @property
    def width(self) -> int:
        return self.image.shape[1]

    @property
    def height(self) -> int:
        return self.image.shape[0]


@dataclass(frozen=True)
class DetectionRecord:
    x: int
    y: int
    w: int
    h: int
    person_score: float
    threat_probability: float
    percent: int
    color: str  # GREEN | RED | UNKNOWN
    label_index: int  # 255 for UNKNOWN


@dataclass(frozen=True)
class Detections:
    frame_seq: int
    items: tuple[DetectionRecord, ...]


@dataclass(frozen=True)
class ModeSwitch:
    mode: int  # MODE_UGV | MODE_UAV


@dataclass(frozen=True)
class Drive:
    left: int  # normalized -127..127
    right: int


@dataclass(frozen=True)
class EStop:
    pass


@dataclass(frozen=True)
class HeadPoseMsg:
    pose: HeadPose
    seq: int


@dataclass(frozen=True)
class Heartbeat:
    pass


@dataclass(frozen=True)
class Status:
    mode: int
    pan: float
    tilt: float
    ugv_pose: tuple[float, float, float]
    uav_pose: tuple[float, float, float]
    e_stopped: bool = False


def rle_encode(raw: bytes) -> bytes:
    """Byte-wise run-length coding: (count u8 >= 1, value u8) pairs."""
    out = bytearray()
    i = 0
    n = len(raw)
    while i < n:
        v = raw[i]
        run = 1
        while run < 255 and i + run < n and raw[i + run] == v:
            run += 1
        out.append(run)
        out.append(v)
        i += run
    return bytes(out)


def rle_decode(data: bytes, expected_len: int) -> bytes:
    if len(data) % 2:
        raise MessageError("RLE data must be (count, value) pairs")
    out = bytearray()
    for i in range(0, len(data), 2):
        count = data[i]
        if count == 0:
            raise MessageError("RLE run of length 0")
        if len(out) + count > expected_len:
            raise MessageError("RLE expands past the declared raster size")
        out.extend(data[i + 1 : i + 2] * count)
    if len(out) != expected_len:
        raise MessageError(f"RLE expanded to {len(out)} bytes, expected {expected_len}")
    return bytes(out)


def encode_video_frame(image: np.ndarray, rle: bool = False) -> bytes:
    if image.ndim == 2:
        fmt = FMT_GRAY8_RLE if rle else FMT_GRAY8
        channels = 1
    elif image.ndim == 3 and image.shape[2] == 3:
        fmt = FMT_RGB8_RLE if rle else FMT_RGB8
        channels = 3
    else:
        raise ValueError(f"unsupported frame shape {image.shape}")
    if image.dtype != np.uint8:
        raise ValueError(f"frames must be uint8, got {image.dtype}")
    h, w = image.shape[:2]
    raw = np.ascontiguousarray(image).tobytes()
    if rle:
        raw = rle_encode(raw)
    del channels
    return struct.pack(">HHB", w, h, fmt) + raw


def decode_video_frame(payload: bytes) -> VideoFrame:
    if len(payload) < 5:
        raise MessageError("video payload shorter than its header")
    w, h, fmt = struct.unpack_from(">HHB", payload)
    body = payload[5:]
    if fmt in (FMT_GRAY8, FMT_GRAY8_RLE):
        expected = w * h
        shape: tuple[int, ...] = (h, w)
    elif fmt in (FMT_RGB8, FMT_RGB8_RLE):
        expected = w * h * 3
        shape = (h, w, 3)
    else:
        raise MessageError(f"unknown pixel format 0x{fmt:02X}")
    if fmt in (FMT_GRAY8_RLE, FMT_RGB8_RLE):
        body = rle_decode(body, expected)
    if len(body) != expected:
        raise MessageError(f"raster is {len(body)} bytes, expected {expected}")
    return VideoFrame(np.frombuffer(body, np.uint8).reshape(shape).copy())


_DET = struct.Struct(">iiIIffBBB")


def encode_detections(msg: Detections) -> bytes:
    out = bytearray(struct.pack(">IH", msg.frame_seq & 0xFFFFFFFF, len(msg.items)))
    for d in msg.items:
        if d.color not in COLOR_CODE:
            raise ValueError(f"bad color {d.color!r}")
        out.extend(
            _DET.pack(
                d.x,
                d.y,
                d.w,
                d.h,
                d.person_score,
                d.threat_probability,
                d.percent,
                COLOR_CODE[d.color],
                d.label_index,
            )
        )
    return bytes(out)


def decode_detections(payload: bytes) -> Detections:
    if len(payload) < 6:
        raise MessageError("detections payload shorter than its header")
    frame_seq, count = struct.unpack_from(">IH", payload)
    expected = 6 + count * _DET.size
    if len(payload) != expected:
        raise MessageError(f"detections payload {len(payload)} bytes, expected {expected}")
    items = []
    for i in range(count):
        x, y, w, h, score, threat, percent, color, label = _DET.unpack_from(
            payload, 6 + i * _DET.size
        )
        if color not in COLOR_NAME:
            raise MessageError(f"unknown color code {color}")
        items.append(
            DetectionRecord(x, y, w, h, score, threat, percent, COLOR_NAME[color], label)
        )
    return Detections(frame_seq, tuple(items))


def encode_control(msg: ModeSwitch | Drive | EStop) -> bytes:
    if isinstance(msg, ModeSwitch):
        if msg.mode not in (MODE_UGV, MODE_UAV):
            raise ValueError(f"bad mode {msg.mode}")
        return struct.pack(">BB", CTRL_MODE_SWITCH, msg.mode)
    if isinstance(msg, Drive):
        return struct.pack(">Bbb", CTRL_DRIVE, msg.left, msg.right)
    if isinstance(msg, EStop):
        return struct.pack(">B", CTRL_E_STOP)
    raise ValueError(f"not a control message: {msg!r}")


def decode_control(payload: bytes) -> ModeSwitch | Drive | EStop:
    if not payload:
        raise MessageError("empty control payload")
    sub = payload[0]
    if sub == CTRL_MODE_SWITCH:
        if len(payload) != 2:
            raise MessageError("mode switch payload must be 2 bytes")
        mode = payload[1]
        if mode not in (MODE_UGV, MODE_UAV):
            raise MessageError(f"unknown mode {mode}")
        return ModeSwitch(mode)
    if sub == CTRL_DRIVE:
        if len(payload) != 3:
            raise MessageError("drive payload must be 3 bytes")
        left, right = struct.unpack_from(">bb", payload, 1)
        return Drive(left, right)
    if sub == CTRL_E_STOP:
        if len(payload) != 1:
            raise MessageError("e-stop payload must be 1 byte")
        return EStop()
    raise MessageError(f"unknown control subcommand 0x{sub:02X}")


_STATUS = struct.Struct(">BB8f")


def encode_status(msg: Status) -> bytes:
    return _STATUS.pack(
        msg.mode,
        1 if msg.e_stopped else 0,
        msg.pan,
        msg.tilt,
        *msg.ugv_pose,
        *msg.uav_pose,
    )


def decode_status(payload: bytes) -> Status:
    if len(payload) != _STATUS.size:
        raise MessageError(f"status payload must be {_STATUS.size} bytes")
    mode, stop, pan, tilt, ux, uy, uh, ax, ay, aa = _STATUS.unpack(payload)
    if mode not in (MODE_UGV, MODE_UAV):
        raise MessageError(f"unknown mode {mode}")
    return Status(mode, pan, tilt, (ux, uy, uh), (ax, ay, aa), bool(stop))


Message = (
    VideoFrame | Detections | ModeSwitch | Drive | EStop | HeadPoseMsg | Heartbeat | Status
)


def decode_message(env: Envelope) -> Message:
    """Turn a decoded envelope into its typed message."""
    try:
        if env.msg_type == MSG_VIDEO_FRAME:
            return decode_video_frame(env.payload)
        if env.msg_type == MSG_DETECTIONS:
            return decode_detections(env.payload)
        if env.msg_type == MSG_CONTROL:
            return decode_control(env.payload)
        if env.msg_type == MSG_HEAD_POSE:
            pose, seq = parse_head_pose(env.payload)
            return HeadPoseMsg(pose, seq)
        if env.msg_type == MSG_HEARTBEAT:
            if env.payload:
                raise MessageError("heartbeat payload must be empty")
            return Heartbeat()
        if env.msg_type == MSG_STATUS:
            return decode_status(env.payload)
    except MessageError:
        raise
    except (ValueError, struct.error) as e:
        raise MessageError(str(e)) from e
    raise MessageError(f"unknown message type 0x{env.msg_type:02X}")


def encode_message(msg: Message) -> tuple[int, bytes]:
    """Return (msg_type, payload) for any typed message."""
    if isinstance(msg, VideoFrame):
        return MSG_VIDEO_FRAME, encode_video_frame(msg.image)
    if isinstance(msg, Detections):
        return MSG_DETECTIONS, encode_detections(msg)
    if isinstance(msg, (ModeSwitch, Drive, EStop)):
        return MSG_CONTROL, encode_control(msg)
    if isinstance(msg, HeadPoseMsg):
        return MSG_HEAD_POSE, head_pose_payload(msg.pose, msg.seq)
    if isinstance(msg, Heartbeat):
        return MSG_HEARTBEAT, b""
    if isinstance(msg, Status):
        return MSG_STATUS, encode_status(msg)
    raise ValueError(f"cannot encode {msg!r}")
