#!/usr/bin/env python3
"""Write envelope byte fixtures for the console's decoder tests.

The frontend must decode exactly what the service emits, so the fixtures
are produced by the Python codec and committed under frontend/test.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from teleguard.telemetry import HeadPose
from teleguard.transport import (
    DetectionRecord,
    Detections,
    HeadPoseMsg,
    Heartbeat,
    ModeSwitch,
    Status,
    VideoFrame,
    encode_envelope,
    encode_message,
)

OUT = Path(__file__).resolve().parent.parent / "frontend" / "test" / "fixtures"


def wire(msg, seq=0, ts=0):
    msg_type, payload = encode_message(msg)
    return encode_envelope(msg_type, payload, seq, ts).hex()


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(42)
    gray = rng.integers(0, 256, size=(4, 6), dtype=np.uint8)
    rgb = rng.integers(0, 256, size=(3, 5, 3), dtype=np.uint8)
    fixtures = {
        "heartbeat": {"hex": wire(Heartbeat(), seq=9, ts=123456789)},
        "video_gray": {
            "hex": wire(VideoFrame(gray), seq=2, ts=1000),
            "width": 6,
            "height": 4,
            "channels": 1,
            "pixels": gray.flatten().tolist(),
        },
        "video_rgb": {
            "hex": wire(VideoFrame(rgb), seq=3),
            "width": 5,
            "height": 3,
            "channels": 3,
            "pixels": rgb.flatten().tolist(),
        },
        "detections": {
            "hex": wire(
                Detections(
                    77,
                    (
                        DetectionRecord(10, 20, 30, 40, 2.5, 0.93, 93, "RED", 1),
                        DetectionRecord(50, 60, 70, 80, 1.25, 0.0, 0, "GREEN", 0),
                        DetectionRecord(5, 6, 7, 8, 0.5, 0.0, 0, "UNKNOWN", 255),
                    ),
                ),
                seq=4,
            ),
            "frame_seq": 77,
            "percents": [93, 0, 0],
            "colors": ["RED", "GREEN", "UNKNOWN"],
            "labels": [1, 0, 255],
        },
        "status": {
            "hex": wire(
                Status(1, 12.5, -3.25, (1.5, 2.5, 90.0), (4.0, 5.0, 30.0), True), seq=5
            ),
            "mode": 1,
            "pan": 12.5,
            "tilt": -3.25,
            "e_stopped": True,
        },
        "head_pose_expected": {
            "hex": wire(HeadPoseMsg(HeadPose(12.34, -56.78), 9), seq=6),
            "pitch": 12.34,
            "yaw": -56.78,
            "seq": 9,
        },
        "mode_switch_expected": {"hex": wire(ModeSwitch(1), seq=7)},
    }
    (OUT / "envelopes.json").write_text(json.dumps(fixtures, indent=1))
    print(f"wrote {OUT / 'envelopes.json'}")


if __name__ == "__main__":
    main()
