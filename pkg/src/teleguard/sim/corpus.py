"""Labeled training/eval data rendered by the simulator.

The ROI corpus drives the reference-classifier fit and its held-out
accuracy check; the window datasets drive detector threshold calibration.
Everything is deterministic per seed.
"""

from __future__ import annotations

import numpy as np

from ..image import box_downscale
from ..threat.classify import LABELS
from ..threat.roi import RoiImage, extract_and_resize
from ..vision.gaussian import GaussianKernelParams, gaussian_blur
from .render import _value_noise
from .sprites import draw_person, weapon_bar_rects

CANVAS = 340


def _noise_canvas(rng: np.random.Generator, h: int, w: int) -> np.ndarray:
    seed = int(rng.integers(0, 2**31))
    base = float(rng.uniform(160.0, 184.0))
    return _value_noise(seed, h, w, base, 22.0, cell=max(12, h // 8))


def _render_roi_sample(rng: np.random.Generator, label: int) -> RoiImage:
    canvas = _noise_canvas(rng, CANVAS, CANVAS)
    height = int(rng.integers(170, 241))
    feet_x = CANVAS // 2 + int(rng.integers(-8, 9))
    feet_y = CANVAS // 2 + height // 2 + int(rng.integers(-6, 7))
    facing = 1 if rng.random() < 0.5 else -1
    weapon = None if label == 0 else LABELS[label]
    box = draw_person(canvas, feet_x, feet_y, height, facing, weapon)
    mx0, mx1, my0, my1 = (float(rng.uniform(0.08, 0.16)) for _ in range(4))
    x0 = max(0, box.x - int(mx0 * box.w))
    y0 = max(0, box.y - int(my0 * box.h))
    x1 = min(CANVAS, box.x + box.w + int(mx1 * box.w))
    y1 = min(CANVAS, box.y + box.h + int(my1 * box.h))
    return extract_and_resize(canvas, (x0, y0, x1 - x0, y1 - y0))


def labeled_corpus(seed: int, n: int) -> list[tuple[RoiImage, int]]:
    """n (RoiImage, label-index) pairs, labels uniform over the 8 classes."""
    if n < 1:
        raise ValueError("corpus size must be >= 1")
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        label = int(rng.integers(0, len(LABELS)))
        out.append((_render_roi_sample(rng, label), label))
    return out


def augmented_corpus(
    seed: int, n: int, unarmed_frac: float | None = None
) -> list[tuple[RoiImage, int]]:
    """Like labeled_corpus but with detector-style framing errors: wide or
    negative margins (cut limbs), mimicking boxes from mismatched pyramid
    levels so the classifier's armed/unarmed call survives bad framing.

    unarmed_frac oversamples the no-weapon class; badly framed crops must
    err green, so the fit needs extra pressure on that side of the
    boundary."""
    if n < 1:
        raise ValueError("corpus size must be >= 1")
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        if unarmed_frac is not None and rng.random() < unarmed_frac:
            label = 0
        else:
            label = int(rng.integers(0, len(LABELS)))
        canvas = _noise_canvas(rng, CANVAS, CANVAS)
        height = int(rng.integers(150, 221))
        feet_x = CANVAS // 2 + int(rng.integers(-10, 11))
        feet_y = CANVAS // 2 + height // 2 + int(rng.integers(-8, 9))
        facing = 1 if rng.random() < 0.5 else -1
        weapon = None if label == 0 else LABELS[label]
        box = draw_person(canvas, feet_x, feet_y, height, facing, weapon)
        # interior windows (negative margins) down to a torso-only crop
        mx0, mx1 = (float(rng.uniform(-0.18, 0.45)) for _ in range(2))
        my0, my1 = (float(rng.uniform(-0.28, 0.45)) for _ in range(2))
        x0 = max(0, box.x - int(mx0 * box.w))
        y0 = max(0, box.y - int(my0 * box.h))
        x1 = min(CANVAS, box.x + box.w + int(mx1 * box.w))
        y1 = min(CANVAS, box.y + box.h + int(my1 * box.h))
        if weapon is not None:
            # an armed label is only truthful while a bar stays in the crop
            bar0x, bar0y, bar1x, bar1y = weapon_bar_rects(
                feet_x, feet_y, height, facing, weapon
            )[0]
            x0 = min(x0, max(0, bar0x - 2))
            y0 = min(y0, max(0, bar0y - 2))
            x1 = max(x1, min(CANVAS, bar1x + 2))
            y1 = max(y1, min(CANVAS, bar1y + 2))
        if x1 - x0 < 24 or y1 - y0 < 24:
            x0, y0, x1, y1 = box.x, box.y, box.x + box.w, box.y + box.h
        out.append((extract_and_resize(canvas, (x0, y0, x1 - x0, y1 - y0)), label))
    return out


_BLUR = GaussianKernelParams()


def _window_with_sprite(
    rng: np.random.Generator,
    win_w: int,
    win_h: int,
    fill: float,
    off_x: int,
    off_y: int,
    armed_prob: float = 0.5,
) -> np.ndarray:
    """Render at 3x scale then box-downscale, mirroring the ingest chain."""
    big_w, big_h = 3 * win_w, 3 * win_h
    canvas = _noise_canvas(rng, big_h + 120, big_w + 120)
    height = int(fill * 3 * win_h + 0.5)
    feet_x = 60 + big_w // 2 + 3 * off_x
    feet_y = 60 + (big_h + height) // 2 + 3 * off_y
    facing = 1 if rng.random() < 0.5 else -1
    weapon = None
    if rng.random() < armed_prob:
        weapon = LABELS[int(rng.integers(1, len(LABELS)))]
    draw_person(canvas, feet_x, feet_y, height, facing, weapon)
    big = canvas[60 : 60 + big_h, 60 : 60 + big_w]
    return gaussian_blur(box_downscale(big, win_w, win_h), _BLUR)


def detector_window_dataset(
    seed: int, n_pos: int, n_neg: int, win_w: int, win_h: int
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Positive windows (sprite at detector framing, jittered) and negatives
    (background, badly shifted, or badly scaled sprites)."""
    rng = np.random.default_rng(seed)
    positives = []
    for _ in range(n_pos):
        fill = float(rng.uniform(0.75, 0.90))
        off_x = int(rng.integers(-4, 5))
        off_y = int(rng.integers(-4, 5))
        positives.append(_window_with_sprite(rng, win_w, win_h, fill, off_x, off_y))
    negatives = []
    for i in range(n_neg):
        r = rng.random()
        if r < 0.55:
            win = _noise_canvas(rng, win_h, win_w)
            negatives.append(gaussian_blur(win, _BLUR))
        elif r < 0.80:
            off_x = int(rng.choice([-1, 1])) * int(rng.integers(win_w // 2, win_w))
            off_y = int(rng.integers(-win_h // 3, win_h // 3 + 1))
            negatives.append(
                _window_with_sprite(rng, win_w, win_h, 0.8, off_x, off_y)
            )
        else:
            fill = float(rng.choice([rng.uniform(0.25, 0.5), rng.uniform(1.25, 1.8)]))
            negatives.append(_window_with_sprite(rng, win_w, win_h, fill, 0, 0))
    return positives, negatives
