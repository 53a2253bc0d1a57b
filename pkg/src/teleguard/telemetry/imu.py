"""Head-pose estimation from accelerometer/magnetometer samples."""

from __future__ import annotations

import math
from dataclasses import dataclass


class UnreliableSampleError(ValueError):
    """Sensor reading too degenerate to derive an angle; skip and hold."""


class InsufficientCalibrationError(ValueError):
    pass


MIN_ACCEL_G = 0.5
MIN_HORIZONTAL_FIELD_UT = 1.0


@dataclass(frozen=True)
class ImuSample:
    accel: tuple[float, float, float]  # g
    mag: tuple[float, float, float]  # microtesla
    timestamp_us: int = 0


@dataclass(frozen=True)
class HeadPose:
    pitch: float  # degrees, [-90, 90]
    yaw: float  # degrees, (-180, 180]
    timestamp_us: int = 0


@dataclass(frozen=True)
class CalibrationOffsets:
    pitch: float
    yaw: float


def wrap_degrees(angle: float) -> float:
    """Normalize to (-180, 180]."""
    a = math.fmod(angle + 180.0, 360.0)
    if a <= 0.0:
        a += 360.0
    return a - 180.0


def pitch_from_accel(accel: tuple[float, float, float]) -> float:
    ax, ay, az = accel
    mag = math.sqrt(ax * ax + ay * ay + az * az)
    if mag <= MIN_ACCEL_G:
        raise UnreliableSampleError(f"|accel| = {mag:.3f} g, gravity unreliable")
    return math.degrees(math.atan2(-ax, math.hypot(ay, az)))


def yaw_from_mag(mag: tuple[float, float, float]) -> float:
    """Heading from the horizontal field components, level-head assumption."""
    mx, my, _ = mag
    if math.hypot(mx, my) <= MIN_HORIZONTAL_FIELD_UT:
        raise UnreliableSampleError("horizontal magnetic field degenerate")
    return wrap_degrees(math.degrees(math.atan2(-my, mx)))


def pose_from_sample(sample: ImuSample) -> HeadPose:
    return HeadPose(
        pitch_from_accel(sample.accel),
        yaw_from_mag(sample.mag),
        sample.timestamp_us,
    )


def calibrate(samples: list[ImuSample], n: int = 10) -> CalibrationOffsets:
    """Rest-pose offsets: mean pitch, circular-mean yaw over n samples."""
    if n < 1:
        raise ValueError("calibration sample count must be >= 1")
    if len(samples) < n:
        raise InsufficientCalibrationError(
            f"need {n} calibration samples, got {len(samples)}"
        )
    pitches = []
    sin_sum = 0.0
    cos_sum = 0.0
    for s in samples[:n]:
        pose = pose_from_sample(s)
        pitches.append(pose.pitch)
        sin_sum += math.sin(math.radians(pose.yaw))
        cos_sum += math.cos(math.radians(pose.yaw))
    yaw = wrap_degrees(math.degrees(math.atan2(sin_sum, cos_sum)))
    return CalibrationOffsets(sum(pitches) / n, yaw)


def apply_offsets(pose: HeadPose, offsets: CalibrationOffsets) -> HeadPose:
    pitch = max(-90.0, min(90.0, pose.pitch - offsets.pitch))
    return HeadPose(pitch, wrap_degrees(pose.yaw - offsets.yaw), pose.timestamp_us)
