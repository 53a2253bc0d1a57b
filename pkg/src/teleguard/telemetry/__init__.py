"""Head tracking: IMU pose estimation, filtering, servo mapping, link framing."""

from .imu import (
    CalibrationOffsets,
    HeadPose,
    ImuSample,
    InsufficientCalibrationError,
    UnreliableSampleError,
    apply_offsets,
    calibrate,
    pitch_from_accel,
    pose_from_sample,
    wrap_degrees,
    yaw_from_mag,
)
from .link import (
    BadStartByteError,
    ChecksumMismatchError,
    LinkFrameError,
    TruncatedFrameError,
    decode_link_frame,
    encode_link_frame,
    head_pose_payload,
    iter_link_frames,
    parse_head_pose,
)
from .lowpass import DEFAULT_ALPHA, LowPassState, low_pass_step
from .pantilt import PAN_LIMIT, SLEW_LIMIT_DEG_PER_S, TILT_LIMIT, PanTiltCommand, pose_to_pan_tilt

__all__ = [
    "BadStartByteError",
    "CalibrationOffsets",
    "ChecksumMismatchError",
    "DEFAULT_ALPHA",
    "HeadPose",
    "ImuSample",
    "InsufficientCalibrationError",
    "LinkFrameError",
    "LowPassState",
    "PAN_LIMIT",
    "PanTiltCommand",
    "SLEW_LIMIT_DEG_PER_S",
    "TILT_LIMIT",
    "TruncatedFrameError",
    "UnreliableSampleError",
    "apply_offsets",
    "calibrate",
    "decode_link_frame",
    "encode_link_frame",
    "head_pose_payload",
    "iter_link_frames",
    "low_pass_step",
    "parse_head_pose",
    "pitch_from_accel",
    "pose_from_sample",
    "pose_to_pan_tilt",
    "wrap_degrees",
    "yaw_from_mag",
]
