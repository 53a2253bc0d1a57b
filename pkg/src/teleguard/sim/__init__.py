"""Deterministic simulated UGV/UAV with pan-tilt camera and sprite scenes."""

from .corpus import detector_window_dataset, labeled_corpus
from .render import (
    MODE_UAV,
    MODE_UGV,
    CameraState,
    FrameRender,
    GroundTruth,
    pixels_per_degree,
    render_frame,
)
from .scene import (
    PERSON_ARMED,
    PERSON_UNARMED,
    WEAPON_CLASSES,
    Entity,
    Scene,
    SceneFormatError,
    format_scene,
    load_scene,
    parse_scene,
    save_scene,
)
from .servo import ServoModel
from .world import RobotSim

__all__ = [
    "CameraState",
    "Entity",
    "FrameRender",
    "GroundTruth",
    "MODE_UAV",
    "MODE_UGV",
    "PERSON_ARMED",
    "PERSON_UNARMED",
    "RobotSim",
    "Scene",
    "SceneFormatError",
    "ServoModel",
    "WEAPON_CLASSES",
    "detector_window_dataset",
    "format_scene",
    "labeled_corpus",
    "load_scene",
    "parse_scene",
    "pixels_per_degree",
    "render_frame",
    "save_scene",
]
