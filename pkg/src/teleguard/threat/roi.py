"""Region-of-interest extraction for classification."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..image import as_gray, resize_bilinear

ROI_SIZE = 227


@dataclass(frozen=True)
class RoiImage:
    """A 227x227 grayscale crop plus the full-frame rect it came from."""

    pixels: np.ndarray
    source_bbox: tuple[int, int, int, int]

    def __post_init__(self) -> None:
        if self.pixels.shape != (ROI_SIZE, ROI_SIZE) or self.pixels.dtype != np.uint8:
            raise ValueError(
                f"ROI must be {ROI_SIZE}x{ROI_SIZE} uint8, got "
                f"{self.pixels.shape} {self.pixels.dtype}"
            )


def extract_and_resize(frame: np.ndarray, bbox: tuple[int, int, int, int]) -> RoiImage:
    """Crop bbox from the frame and bilinear-resize to 227x227."""
    g = as_gray(frame)
    x, y, w, h = bbox
    fh, fw = g.shape
    if w <= 0 or h <= 0:
        raise ValueError(f"bbox size must be positive, got {w}x{h}")
    if x < 0 or y < 0 or x + w > fw or y + h > fh:
        raise ValueError(f"bbox ({x},{y},{w},{h}) outside frame {fw}x{fh}")
    crop = g[y : y + h, x : x + w]
    return RoiImage(resize_bilinear(crop, ROI_SIZE, ROI_SIZE), (x, y, w, h))
