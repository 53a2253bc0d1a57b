"""Person sprite rasterization.

Side-view person: rectangle torso, disc head, two legs, arm strips, all in
dark tones against the lighter background. The armed variant paints one or
two bright horizontal bars whose height, length, and thickness are the
per-weapon-class signature the classifier learns.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BODY_ASPECT = 0.42  # sprite bbox width as a fraction of its height
BAR_VALUE = 235

# weapon signature: (y_frac, half_len_frac, half_thick_frac, x_off_frac) per
# bar, as fractions of sprite height; distinct heights/lengths keep the
# classes linearly separable in gradient-histogram space
WEAPON_GEOMETRY: dict[str, tuple[tuple[float, float, float, float], ...]] = {
    "assault_rifle": ((0.42, 0.30, 0.025, 0.02),),
    "revolver": ((0.32, 0.12, 0.022, 0.12),),
    "pistol": ((0.52, 0.11, 0.020, 0.12),),
    "shotgun": ((0.58, 0.30, 0.028, 0.00),),
    "submachine_gun": ((0.42, 0.16, 0.025, 0.05), (0.50, 0.16, 0.025, 0.05)),
    "sniper_rifle": ((0.28, 0.36, 0.018, 0.00),),
    "machine_gun": ((0.66, 0.28, 0.045, 0.00),),
}


@dataclass(frozen=True)
class SpriteBox:
    x: int
    y: int
    w: int
    h: int

    @property
    def centroid(self) -> tuple[int, int]:
        return (self.x + self.w // 2, self.y + self.h // 2)


def sprite_box(feet_x: int, feet_y: int, height: int) -> SpriteBox:
    w = max(2, int(BODY_ASPECT * height + 0.5))
    return SpriteBox(feet_x - w // 2, feet_y - height, w, height)


def _fill(img: np.ndarray, x0: int, y0: int, x1: int, y1: int, value: int) -> None:
    h, w = img.shape
    x0 = max(0, min(w, x0))
    x1 = max(0, min(w, x1))
    y0 = max(0, min(h, y0))
    y1 = max(0, min(h, y1))
    if x0 < x1 and y0 < y1:
        img[y0:y1, x0:x1] = value


def _disc(img: np.ndarray, cx: int, cy: int, r: int, value: int) -> None:
    h, w = img.shape
    y0 = max(0, cy - r)
    y1 = min(h, cy + r + 1)
    x0 = max(0, cx - r)
    x1 = min(w, cx + r + 1)
    if y0 >= y1 or x0 >= x1:
        return
    ys = np.arange(y0, y1)[:, None] - cy
    xs = np.arange(x0, x1)[None, :] - cx
    img[y0:y1, x0:x1][ys * ys + xs * xs <= r * r] = value


def weapon_bar_rects(
    feet_x: int, feet_y: int, height: int, facing: int, weapon: str
) -> list[tuple[int, int, int, int]]:
    """Pixel rects (x0, y0, x1, y1) the weapon bars of this sprite occupy."""
    top = feet_y - height
    rects = []
    for y_frac, half_len, half_thick, x_off in WEAPON_GEOMETRY[weapon]:
        cy = top + int(y_frac * height + 0.5)
        cx = feet_x + facing * int(x_off * height + 0.5)
        hl = max(2, int(half_len * height + 0.5))
        ht = max(1, int(half_thick * height + 0.5))
        rects.append((cx - hl, cy - ht, cx + hl, cy + ht))
    return rects


def draw_person(
    img: np.ndarray,
    feet_x: int,
    feet_y: int,
    height: int,
    facing: int = 1,
    weapon: str | None = None,
) -> SpriteBox:
    """Paint the sprite (clipped to the image) and return its body box."""
    box = sprite_box(feet_x, feet_y, height)
    top = box.y
    hh = height

    def fy(frac: float) -> int:
        return top + int(frac * hh + 0.5)

    def fx(frac: float) -> int:
        return feet_x + int(frac * hh + 0.5)

    def fxn(frac: float) -> int:
        return feet_x - int(frac * hh + 0.5)

    # torso
    _fill(img, fxn(0.13), fy(0.22), fx(0.13), fy(0.62), 52)
    # arms
    _fill(img, fxn(0.19), fy(0.26), fxn(0.13), fy(0.56), 58)
    _fill(img, fx(0.13), fy(0.26), fx(0.19), fy(0.56), 58)
    # legs with a gap between them
    _fill(img, fxn(0.125), fy(0.62), fxn(0.02), feet_y, 47)
    _fill(img, fx(0.02), fy(0.62), fx(0.125), feet_y, 47)
    # head
    _disc(img, feet_x, fy(0.11), max(1, int(0.10 * hh + 0.5)), 68)

    if weapon is not None:
        for x0, y0, x1, y1 in weapon_bar_rects(feet_x, feet_y, height, facing, weapon):
            _fill(img, x0, y0, x1, y1, BAR_VALUE)
    return box


def draw_person_topdown(
    img: np.ndarray,
    cx: int,
    cy: int,
    size: int,
    facing: int = 1,
    weapon: str | None = None,
) -> SpriteBox:
    """Overhead view: shoulder bar plus head disc; armed adds the bright bar."""
    half_w = max(2, int(0.50 * size + 0.5))
    half_d = max(1, int(0.18 * size + 0.5))
    _fill(img, cx - half_w, cy - half_d, cx + half_w, cy + half_d, 55)
    _disc(img, cx, cy, max(1, int(0.16 * size + 0.5)), 70)
    if weapon is not None:
        ht = max(1, int(0.08 * size + 0.5))
        y0 = cy + facing * (half_d + 1)
        _fill(img, cx - half_w, min(y0, y0 + facing * 2 * ht), cx + half_w,
              max(y0, y0 + facing * 2 * ht), BAR_VALUE)
    return SpriteBox(cx - half_w, cy - 2 * half_d, 2 * half_w, 4 * half_d)
