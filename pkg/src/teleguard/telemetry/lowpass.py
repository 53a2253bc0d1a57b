"""Exponential moving average low-pass filter for head poses.

Pitch filters on the plain difference; yaw on the shortest-arc difference
so a 179 -> -179 degree crossing nudges by alpha*2 degrees instead of
swinging 358.
"""

from __future__ import annotations

from dataclasses import dataclass

from .imu import HeadPose, wrap_degrees

DEFAULT_ALPHA = 0.2  # at the 50 Hz telemetry rate


@dataclass
class LowPassState:
    alpha: float
    pitch: float
    yaw: float
    initialized: bool = True

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")

    @classmethod
    def fresh(cls, alpha: float = DEFAULT_ALPHA) -> "LowPassState":
        return cls(alpha, 0.0, 0.0, initialized=False)


def low_pass_step(state: LowPassState, pose: HeadPose) -> HeadPose:
    """Advance the filter by one sample and return the filtered pose."""
    if not state.initialized:
        state.pitch = pose.pitch
        state.yaw = pose.yaw
        state.initialized = True
    else:
        state.pitch += state.alpha * (pose.pitch - state.pitch)
        state.yaw = wrap_degrees(
            state.yaw + state.alpha * wrap_degrees(pose.yaw - state.yaw)
        )
    return HeadPose(state.pitch, state.yaw, pose.timestamp_us)
