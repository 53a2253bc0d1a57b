"""Frame-processing service between the robot and the operator console."""

from .config import (
    ConfigFileError,
    LoadedModels,
    PipelineConfig,
    apply_options,
    load_models,
    parse_config_file,
)
from .metrics import STAGES, StageMetrics
from .mission import Mission, MissionFrame, run_mission
from .pipeline import process_frame
from .server import InferenceService, ServiceOptions

__all__ = [
    "ConfigFileError",
    "InferenceService",
    "LoadedModels",
    "Mission",
    "MissionFrame",
    "PipelineConfig",
    "STAGES",
    "ServiceOptions",
    "StageMetrics",
    "apply_options",
    "load_models",
    "parse_config_file",
    "process_frame",
    "run_mission",
]
