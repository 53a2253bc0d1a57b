"""Frame annotation and HMD formatting."""

from .draw import (
    BOX_THICKNESS,
    COLOR_GREEN,
    COLOR_RED,
    COLOR_UNKNOWN,
    FRAME_H,
    FRAME_W,
    AnnotatedFrame,
    draw_annotations,
)
from .ppm import read_ppm, write_ppm
from .sbs import HALF_W, SbsFrame, to_half_sbs

__all__ = [
    "AnnotatedFrame",
    "BOX_THICKNESS",
    "COLOR_GREEN",
    "COLOR_RED",
    "COLOR_UNKNOWN",
    "FRAME_H",
    "FRAME_W",
    "HALF_W",
    "SbsFrame",
    "draw_annotations",
    "read_ppm",
    "to_half_sbs",
    "write_ppm",
]
