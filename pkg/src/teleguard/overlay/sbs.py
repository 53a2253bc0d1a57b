"""Half side-by-side conversion for the head-mounted display."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..image import as_rgb
from ..kernels import backend as _kern
from .draw import FRAME_H, FRAME_W, AnnotatedFrame

HALF_W = FRAME_W // 2


@dataclass(frozen=True)
class SbsFrame:
    """1900x1000 frame composed of two identical 950x1000 halves."""

    image: np.ndarray
    frame_seq: int = 0
    timestamp_us: int = 0


def to_half_sbs(frame: AnnotatedFrame | np.ndarray) -> SbsFrame:
    """Decimate horizontally 2:1 (pair average, round half up per channel)
    and duplicate the 950x1000 half across both eyes."""
    if isinstance(frame, AnnotatedFrame):
        img = frame.image
        seq = frame.frame_seq
        ts = frame.timestamp_us
    else:
        img = frame
        seq = 0
        ts = 0
    img = as_rgb(img)
    if img.shape != (FRAME_H, FRAME_W, 3):
        raise ValueError(
            f"SBS input must be {FRAME_W}x{FRAME_H} RGB, got "
            f"{img.shape[1]}x{img.shape[0]}"
        )
    return SbsFrame(_kern.sbs_half_rgb(img), seq, ts)
