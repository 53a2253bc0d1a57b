"""TSP1 message protocol: envelopes, typed messages, channel policies."""

from .envelope import (
    KNOWN_TYPES,
    MAX_PAYLOAD,
    MSG_CONTROL,
    MSG_DETECTIONS,
    MSG_HEAD_POSE,
    MSG_HEARTBEAT,
    MSG_STATUS,
    MSG_VIDEO_FRAME,
    BadMagicError,
    CrcMismatchError,
    Envelope,
    EnvelopeError,
    EnvelopeStream,
    Sequencer,
    TruncatedError,
    UnknownTypeError,
    decode_envelope,
    encode_envelope,
)
from .messages import (
    CTRL_DRIVE,
    CTRL_E_STOP,
    CTRL_MODE_SWITCH,
    MODE_UAV,
    MODE_UGV,
    DetectionRecord,
    Detections,
    Drive,
    EStop,
    HeadPoseMsg,
    Heartbeat,
    MessageError,
    ModeSwitch,
    Status,
    VideoFrame,
    decode_message,
    encode_message,
    rle_decode,
    rle_encode,
)
from .queues import (
    ControlQueue,
    GapReport,
    MediaQueue,
    SequenceGap,
    SequenceWatcher,
    detect_sequence_gaps,
)

__all__ = [
    "BadMagicError",
    "ControlQueue",
    "CrcMismatchError",
    "CTRL_DRIVE",
    "CTRL_E_STOP",
    "CTRL_MODE_SWITCH",
    "DetectionRecord",
    "Detections",
    "Drive",
    "EStop",
    "Envelope",
    "EnvelopeError",
    "EnvelopeStream",
    "GapReport",
    "HeadPoseMsg",
    "Heartbeat",
    "KNOWN_TYPES",
    "MAX_PAYLOAD",
    "MediaQueue",
    "MessageError",
    "ModeSwitch",
    "MODE_UAV",
    "MODE_UGV",
    "MSG_CONTROL",
    "MSG_DETECTIONS",
    "MSG_HEAD_POSE",
    "MSG_HEARTBEAT",
    "MSG_STATUS",
    "MSG_VIDEO_FRAME",
    "SequenceGap",
    "SequenceWatcher",
    "Sequencer",
    "Status",
    "TruncatedError",
    "UnknownTypeError",
    "VideoFrame",
    "decode_envelope",
    "decode_message",
    "detect_sequence_gaps",
    "encode_envelope",
    "encode_message",
    "rle_decode",
    "rle_encode",
]
