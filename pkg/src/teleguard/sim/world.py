"""The simulated robot: command handling, dynamics, and frame production."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..image import gray_to_rgb
from ..transport.messages import (
    MODE_UAV,
    MODE_UGV as MODE_UGV_CODE,
    Drive,
    EStop,
    HeadPoseMsg,
    ModeSwitch,
    Status,
)
from .render import (
    MODE_UAV as MODE_UAV_NAME,
    MODE_UGV as MODE_UGV_NAME,
    CameraState,
    FrameRender,
    render_frame,
)
from .scene import Scene
from .servo import ServoModel

DRIVE_SPEED_UNITS_PER_S = 3.0  # full stick forward
TURN_RATE_DEG_PER_S = 90.0  # full differential

_MODE_NAME = {MODE_UGV_CODE: MODE_UGV_NAME, MODE_UAV: MODE_UAV_NAME}
_MODE_CODE = {v: k for k, v in _MODE_NAME.items()}


@dataclass
class RobotSim:
    """Deterministic robot: same scene, seed, and command log produce a
    bit-identical frame stream.

    Mode switches latch and take effect at the next frame boundary. An
    e-stop zeroes and locks the drive until an explicit zero drive command
    releases it.
    """

    scene: Scene
    resolution: tuple[int, int] = (1900, 1000)
    camera: CameraState = field(default_factory=CameraState)
    frame_count: int = 0

    def __post_init__(self) -> None:
        self.servo = ServoModel()
        self.servo.pan.position = self.camera.pan
        self.servo.tilt.position = self.camera.tilt
        self._drive = (0.0, 0.0)
        self._pending_mode: str | None = None
        self.e_stopped = False

    def apply(self, msg) -> None:
        """Apply one control-plane message."""
        if isinstance(msg, ModeSwitch):
            self._pending_mode = _MODE_NAME[msg.mode]
        elif isinstance(msg, Drive):
            if msg.left == 0 and msg.right == 0:
                self.e_stopped = False
                self._drive = (0.0, 0.0)
            elif not self.e_stopped:
                self._drive = (msg.left / 127.0, msg.right / 127.0)
        elif isinstance(msg, EStop):
            self.e_stopped = True
            self._drive = (0.0, 0.0)
        elif isinstance(msg, HeadPoseMsg):
            self.servo.set_target(msg.pose.yaw, msg.pose.pitch)
        else:
            raise TypeError(f"robot cannot apply {msg!r}")

    def step(self, dt: float, commands=()) -> None:
        if dt <= 0:
            raise ValueError(f"dt must be positive, got {dt}")
        for msg in commands:
            self.apply(msg)
        pan, tilt = self.servo.step(dt)
        x, y, heading = self.camera.ugv_pose
        left, right = self._drive
        v = 0.5 * (left + right) * DRIVE_SPEED_UNITS_PER_S
        omega = (right - left) * TURN_RATE_DEG_PER_S
        if self.camera.mode == MODE_UGV_NAME:
            x += v * math.cos(math.radians(heading)) * dt
            y += v * math.sin(math.radians(heading)) * dt
            heading = (heading + omega * dt) % 360.0
        bw, bh = self.scene.bounds
        x = min(max(x, 0.0), bw)
        y = min(max(y, 0.0), bh)
        self.camera = CameraState(
            self.camera.mode, pan, tilt, (x, y, heading), self.camera.uav_pose
        )

    def render(self) -> FrameRender:
        """Render the next frame, applying any pending mode switch first."""
        if self._pending_mode is not None:
            self.camera = CameraState(
                self._pending_mode,
                self.camera.pan,
                self.camera.tilt,
                self.camera.ugv_pose,
                self.camera.uav_pose,
            )
            self._pending_mode = None
        self.frame_count += 1
        return render_frame(self.scene, self.camera, self.resolution)

    def render_rgb(self) -> tuple[np.ndarray, FrameRender]:
        fr = self.render()
        return gray_to_rgb(fr.image), fr

    def status(self) -> Status:
        return Status(
            _MODE_CODE[self.camera.mode],
            self.camera.pan,
            self.camera.tilt,
            self.camera.ugv_pose,
            self.camera.uav_pose,
            self.e_stopped,
        )

    @staticmethod
    def capabilities() -> dict:
        """Hardware capability metadata; locomotion itself is not simulated."""
        from ..telemetry.pantilt import PAN_LIMIT, SLEW_LIMIT_DEG_PER_S, TILT_LIMIT
        from .render import MAX_SLOPE_DEG

        return {
            "max_slope_deg": MAX_SLOPE_DEG,
            "servo_slew_deg_per_s": SLEW_LIMIT_DEG_PER_S,
            "pan_range_deg": (-PAN_LIMIT, PAN_LIMIT),
            "tilt_range_deg": (-TILT_LIMIT, TILT_LIMIT),
            "drive_speed_units_per_s": DRIVE_SPEED_UNITS_PER_S,
        }
