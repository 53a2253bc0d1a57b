"""Multi-scale sliding-window detection and non-maximum suppression."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..image import as_gray, box_downscale
from ..kernels import backend as _kern
from .haar import CascadeModel, flatten_cascade
from .hog import HogParams, LinearSvmModel
from .integral import integral_image


@dataclass(frozen=True)
class Detection:
    """A detector hit in full-frame pixel coordinates."""

    x: int
    y: int
    w: int
    h: int
    person_score: float
    scale: float

    @property
    def bbox(self) -> tuple[int, int, int, int]:
        return (self.x, self.y, self.w, self.h)


@dataclass(frozen=True)
class PyramidParams:
    scale_factor: float = 1.2
    stride: int = 8
    min_window: tuple[int, int] | None = None  # defaults to the detector window

    def __post_init__(self) -> None:
        if self.scale_factor <= 1.0:
            raise ValueError(f"scale_factor must be > 1, got {self.scale_factor}")
        if self.stride < 1:
            raise ValueError(f"stride must be >= 1, got {self.stride}")


def _pyramid_levels(img: np.ndarray, min_w: int, min_h: int, factor: float):
    """Yield (level_image, scale_x, scale_y): the image repeatedly box-average
    downscaled by `factor`, until a level no longer fits the minimum window."""
    h0, w0 = img.shape
    level = img
    while level.shape[0] >= min_h and level.shape[1] >= min_w:
        yield level, w0 / level.shape[1], h0 / level.shape[0]
        nw = int(level.shape[1] / factor)
        nh = int(level.shape[0] / factor)
        if nw < 1 or nh < 1 or (nw, nh) == (level.shape[1], level.shape[0]):
            return
        level = box_downscale(level, nw, nh)


def sliding_window_detect(
    img: np.ndarray,
    detector: CascadeModel | tuple[HogParams, LinearSvmModel],
    pyramid: PyramidParams = PyramidParams(),
) -> list[Detection]:
    """Enumerate stride-aligned windows over every pyramid level and map
    accepted windows back to full-frame coordinates.

    Results are deterministically ordered by (level, row-major origin).
    An image smaller than the minimum window yields an empty list.
    """
    g = as_gray(img)
    if isinstance(detector, CascadeModel):
        win_w, win_h = detector.window_w, detector.window_h
        arrays = flatten_cascade(detector)
        hog_spec = None
    else:
        params, svm = detector
        if svm.weights.size != params.descriptor_len:
            raise ValueError(
                f"svm weights length {svm.weights.size} does not match "
                f"descriptor length {params.descriptor_len}"
            )
        win_w, win_h = params.window_w, params.window_h
        arrays = None
        hog_spec = (params, svm)

    min_w, min_h = pyramid.min_window or (win_w, win_h)
    min_w = max(min_w, win_w)
    min_h = max(min_h, win_h)

    detections: list[Detection] = []
    for level, sx, sy in _pyramid_levels(g, min_w, min_h, pyramid.scale_factor):
        if arrays is not None:
            ii = integral_image(level)
            xs, ys, scores = _kern.cascade_sweep(
                ii,
                win_w,
                win_h,
                pyramid.stride,
                arrays.stage_thr,
                arrays.stage_start,
                arrays.weak_split,
                arrays.weak_left,
                arrays.weak_right,
                arrays.rect_start,
                arrays.rect_x,
                arrays.rect_y,
                arrays.rect_w,
                arrays.rect_h,
                arrays.rect_wt,
            )
        else:
            params, svm = hog_spec
            xs, ys, scores = _kern.hog_sweep(
                level,
                win_w,
                win_h,
                pyramid.stride,
                params.cell,
                params.bins,
                params.clip,
                params.epsilon,
                svm.weights,
                svm.bias,
                svm.threshold,
            )
        fh, fw = g.shape
        for x, y, score in zip(xs, ys, scores):
            fx = int(x * sx + 0.5)
            fy = int(y * sy + 0.5)
            bw = int(win_w * sx + 0.5)
            bh = int(win_h * sy + 0.5)
            fx = min(fx, fw - 1)
            fy = min(fy, fh - 1)
            bw = max(1, min(bw, fw - fx))
            bh = max(1, min(bh, fh - fy))
            detections.append(Detection(fx, fy, bw, bh, float(score), sx))
    return detections


def _iou(a: Detection, b: Detection) -> float:
    x1 = max(a.x, b.x)
    y1 = max(a.y, b.y)
    x2 = min(a.x + a.w, b.x + b.w)
    y2 = min(a.y + a.h, b.y + b.h)
    iw = max(0, x2 - x1)
    ih = max(0, y2 - y1)
    inter = iw * ih
    if inter == 0:
        return 0.0
    union = a.w * a.h + b.w * b.h - inter
    return inter / union


def non_max_suppression(
    detections: list[Detection], iou_threshold: float = 0.45
) -> list[Detection]:
    """Greedy suppression: keep a detection iff its IoU with every
    already-kept detection stays at or below the threshold.

    Candidates are visited by (score desc, x asc, y asc), which makes
    ties deterministic.
    """
    if not 0.0 < iou_threshold <= 1.0:
        raise ValueError(f"iou_threshold must be in (0, 1], got {iou_threshold}")
    ordered = sorted(detections, key=lambda d: (-d.person_score, d.x, d.y))
    kept: list[Detection] = []
    for cand in ordered:
        if all(_iou(cand, k) <= iou_threshold for k in kept):
            kept.append(cand)
    return kept
