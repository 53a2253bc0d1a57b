"""Synchronous scripted missions: the deterministic end-to-end harness.

Frames are pulled straight from the simulator into the pipeline on a fixed
logical clock, so two runs of the same mission produce bit-identical
output streams and identical counters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from ..overlay.draw import AnnotatedFrame
from ..overlay.sbs import SbsFrame
from ..sim.render import CameraState, GroundTruth
from ..sim.world import RobotSim
from ..sim.scene import Scene
from ..transport.messages import Detections
from .config import LoadedModels, PipelineConfig, load_models
from .metrics import StageMetrics
from .pipeline import process_frame


@dataclass
class MissionFrame:
    index: int
    truths: list[GroundTruth]
    annotated: AnnotatedFrame
    sbs: SbsFrame
    detections: Detections


@dataclass
class Mission:
    scene: Scene
    camera: CameraState = field(default_factory=CameraState)
    n_frames: int = 100
    fps: float = 30.0
    script: dict[int, list] = field(default_factory=dict)  # frame index -> messages


def run_mission(
    mission: Mission,
    config: PipelineConfig = PipelineConfig(),
    models: LoadedModels | None = None,
    metrics: StageMetrics | None = None,
) -> Iterator[MissionFrame]:
    models = models or load_models(config)
    metrics = metrics if metrics is not None else StageMetrics()
    sim = RobotSim(mission.scene, (1900, 1000), mission.camera)
    dt = 1.0 / mission.fps
    for i in range(mission.n_frames):
        for msg in mission.script.get(i, []):
            sim.apply(msg)
        sim.step(dt)
        rgb, fr = sim.render_rgb()
        metrics.bump("frames_in")
        ts = int(i * 1_000_000 / mission.fps)
        annotated, sbs, dets = process_frame(rgb, models, config, metrics, i, ts)
        yield MissionFrame(i, fr.truths, annotated, sbs, dets)
