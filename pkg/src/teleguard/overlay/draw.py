"""Detection overlays: color-coded boxes and percent labels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..image import as_rgb
from ..threat.classify import GREEN, RED, ThreatVerdict
from ..vision.detect import Detection
from .font import text_mask

FRAME_W = 1900
FRAME_H = 1000

BOX_THICKNESS = 3
TEXT_SCALE = 3
DASH_ON = 6
DASH_OFF = 4

COLOR_GREEN = (0, 255, 0)
COLOR_RED = (255, 0, 0)
COLOR_UNKNOWN = (128, 128, 128)


@dataclass(frozen=True)
class AnnotatedFrame:
    """RGB frame plus the detections drawn onto it.

    The streaming pipeline always carries full 1900x1000 frames; the SBS
    converter enforces that size.
    """

    image: np.ndarray
    detections: tuple[tuple[Detection, ThreatVerdict | None], ...]
    frame_seq: int = 0
    timestamp_us: int = 0


def _color_for(verdict: ThreatVerdict | None) -> tuple[int, int, int]:
    if verdict is None:
        return COLOR_UNKNOWN
    if verdict.color == RED:
        return COLOR_RED
    if verdict.color == GREEN:
        return COLOR_GREEN
    raise ValueError(f"verdict color must be GREEN or RED, got {verdict.color!r}")


def _solid_box(img: np.ndarray, x: int, y: int, w: int, h: int, color) -> None:
    t = BOX_THICKNESS
    img[y : y + t, x : x + w] = color
    img[y + h - t : y + h, x : x + w] = color
    img[y : y + h, x : x + t] = color
    img[y : y + h, x + w - t : x + w] = color


def _dash_runs(length: int) -> list[tuple[int, int]]:
    runs = []
    pos = 0
    while pos < length:
        end = min(pos + DASH_ON, length)
        runs.append((pos, end))
        pos = end + DASH_OFF
    return runs


def _dashed_box(img: np.ndarray, x: int, y: int, w: int, h: int, color) -> None:
    t = BOX_THICKNESS
    for a, b in _dash_runs(w):
        img[y : y + t, x + a : x + b] = color
        img[y + h - t : y + h, x + a : x + b] = color
    for a, b in _dash_runs(h):
        img[y + a : y + b, x : x + t] = color
        img[y + a : y + b, x + w - t : x + w] = color


def draw_annotations(
    frame: np.ndarray,
    items: list[tuple[Detection, ThreatVerdict | None]],
    frame_seq: int = 0,
    timestamp_us: int = 0,
) -> AnnotatedFrame:
    """Draw a 3-px rectangle per detection (green below threshold, red at or
    above, dashed gray when the classifier was unavailable) and the percent
    label above the top-left corner. Pixels outside borders and glyph cells
    stay untouched.
    """
    img = as_rgb(frame).copy()
    fh, fw = img.shape[:2]
    for det, vd in items:
        x, y, w, h = det.bbox
        if x < 0 or y < 0 or x + w > fw or y + h > fh or w <= 0 or h <= 0:
            raise ValueError(f"detection bbox {det.bbox} outside frame {fw}x{fh}")
        color = _color_for(vd)
        if vd is None:
            _dashed_box(img, x, y, w, h, color)
            continue
        _solid_box(img, x, y, w, h, color)
        mask = text_mask(str(vd.percent), TEXT_SCALE)
        th, tw = mask.shape
        ty = max(0, y - th - 2)
        tx = min(max(0, x), fw - tw)
        region = img[ty : ty + th, tx : tx + tw]
        region[mask[: region.shape[0], : region.shape[1]]] = color
    return AnnotatedFrame(img, tuple(items), frame_seq, timestamp_us)
