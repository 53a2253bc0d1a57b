"""Pan-tilt servo dynamics: slew-limited tracking of a commanded target."""

from __future__ import annotations

from dataclasses import dataclass

from ..telemetry.pantilt import PAN_LIMIT, SLEW_LIMIT_DEG_PER_S, TILT_LIMIT


@dataclass
class ServoAxis:
    limit: float
    position: float = 0.0
    target: float = 0.0

    def set_target(self, value: float) -> None:
        self.target = max(-self.limit, min(self.limit, value))

    def step(self, dt: float, slew: float = SLEW_LIMIT_DEG_PER_S) -> float:
        max_move = slew * dt
        delta = self.target - self.position
        if delta > max_move:
            delta = max_move
        elif delta < -max_move:
            delta = -max_move
        self.position += delta
        self.position = max(-self.limit, min(self.limit, self.position))
        return self.position


@dataclass
class ServoModel:
    slew_limit: float = SLEW_LIMIT_DEG_PER_S

    def __post_init__(self) -> None:
        self.pan = ServoAxis(PAN_LIMIT)
        self.tilt = ServoAxis(TILT_LIMIT)

    def set_target(self, pan: float, tilt: float) -> None:
        self.pan.set_target(pan)
        self.tilt.set_target(tilt)

    def step(self, dt: float) -> tuple[float, float]:
        return (
            self.pan.step(dt, self.slew_limit),
            self.tilt.step(dt, self.slew_limit),
        )
