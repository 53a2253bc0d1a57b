"""Head pose to pan-tilt servo command mapping."""

from __future__ import annotations

from dataclasses import dataclass

from .imu import HeadPose

PAN_LIMIT = 90.0
TILT_LIMIT = 45.0
SLEW_LIMIT_DEG_PER_S = 300.0


@dataclass(frozen=True)
class PanTiltCommand:
    pan: float  # degrees, clamped to [-90, 90]
    tilt: float  # degrees, clamped to [-45, 45]
    seq: int = 0


def pose_to_pan_tilt(pose: HeadPose, seq: int = 0) -> PanTiltCommand:
    pan = max(-PAN_LIMIT, min(PAN_LIMIT, pose.yaw))
    tilt = max(-TILT_LIMIT, min(TILT_LIMIT, pose.pitch))
    return PanTiltCommand(pan, tilt, seq)
