"""Deterministic camera rendering for both drive modes.

The background is a precomputed seeded panorama; the viewport is an
integer-offset slice of it, so changing pan/tilt translates the whole
frame by exactly round(angle * pixels-per-degree). Sprites are anchored
on the same panorama pixel grid, which keeps the translation exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..telemetry.pantilt import PAN_LIMIT, TILT_LIMIT
from .scene import PERSON_ARMED, Scene
from .sprites import SpriteBox, draw_person, draw_person_topdown

MODE_UGV = "UGV"
MODE_UAV = "UAV"

FOV_H_DEG = 95.0
FOV_V_DEG = 50.0
PERSON_HEIGHT_UNITS = 1.7
FOCAL_FRAC = 0.9  # focal length in pixels = FOCAL_FRAC * frame height
GROUND_DROP_FRAC = 0.7  # feet drop below horizon = this * height / distance
UAV_VIEW_UNITS = 55.0  # world units spanned by the frame height top-down
UAV_NOMINAL_ALT = 12.0

# capability metadata only; locomotion over terrain is not simulated
MAX_SLOPE_DEG = 50.0


def pixels_per_degree(width: int, height: int) -> tuple[float, float]:
    return width / FOV_H_DEG, height / FOV_V_DEG


@dataclass(frozen=True)
class CameraState:
    mode: str = MODE_UGV
    pan: float = 0.0
    tilt: float = 0.0
    ugv_pose: tuple[float, float, float] = (0.0, 0.0, 0.0)  # x, y, heading deg
    uav_pose: tuple[float, float, float] = (0.0, 0.0, UAV_NOMINAL_ALT)  # x, y, alt

    def __post_init__(self) -> None:
        if self.mode not in (MODE_UGV, MODE_UAV):
            raise ValueError(f"unknown camera mode {self.mode!r}")
        if not -PAN_LIMIT <= self.pan <= PAN_LIMIT:
            raise ValueError(f"pan {self.pan} outside +-{PAN_LIMIT}")
        if not -TILT_LIMIT <= self.tilt <= TILT_LIMIT:
            raise ValueError(f"tilt {self.tilt} outside +-{TILT_LIMIT}")


@dataclass(frozen=True)
class GroundTruth:
    entity_id: int
    kind: str
    weapon: str | None
    bbox: tuple[int, int, int, int] | None  # on-screen body box, clipped
    centroid: tuple[int, int] | None
    fully_visible: bool


@dataclass
class FrameRender:
    image: np.ndarray  # grayscale
    truths: list[GroundTruth] = field(default_factory=list)


_PANO_CACHE: dict[tuple, np.ndarray] = {}


def _value_noise(seed: int, h: int, w: int, base: float, amp: float, cell: int) -> np.ndarray:
    """Seeded bilinear value noise plus a fine tiled component, uint8.

    Separable: lattice columns are interpolated once for the full width,
    then rows blend two column vectors each, keeping the cost near one
    pass over the output.
    """
    rng = np.random.default_rng(seed)
    gh = h // cell + 2
    gw = w // cell + 2
    grid = rng.uniform(-1.0, 1.0, (gh, gw)).astype(np.float32)
    tile = rng.uniform(-1.0, 1.0, (64, 64)).astype(np.float32)
    xs = np.arange(w, dtype=np.float32) / cell
    x0 = xs.astype(np.int32)
    fx = xs - x0
    cols = grid[:, x0] * (1.0 - fx) + grid[:, x0 + 1] * fx  # (gh, w)
    ys = np.arange(h, dtype=np.float32) / cell
    y0 = ys.astype(np.int32)
    fy = ys - y0
    fine = np.tile(tile, (h // 64 + 1, w // 64 + 1))[:h, :w]
    out = np.empty((h, w), np.uint8)
    for r0 in range(0, h, 256):
        r1 = min(h, r0 + 256)
        fyr = fy[r0:r1, None]
        v = cols[y0[r0:r1]] * (1.0 - fyr) + cols[y0[r0:r1] + 1] * fyr
        band = base + amp * v + 6.0 * fine[r0:r1]
        out[r0:r1] = np.clip(band + 0.5, 0, 255).astype(np.uint8)
    return out


def _panorama(seed: int, mode: str, width: int, height: int) -> np.ndarray:
    key = (seed, mode, width, height)
    pano = _PANO_CACHE.get(key)
    if pano is None:
        ppd_x, ppd_y = pixels_per_degree(width, height)
        pw = int(round(360.0 * ppd_x)) + width
        ph = height + 2 * int(round(TILT_LIMIT * ppd_y))
        noise_seed = (seed * 2 + (1 if mode == MODE_UAV else 0)) & 0x7FFFFFFF
        base, amp = (172.0, 22.0) if mode == MODE_UGV else (150.0, 18.0)
        pano = _value_noise(noise_seed, ph, pw, base, amp, cell=max(24, height // 16))
        if len(_PANO_CACHE) > 6:
            _PANO_CACHE.clear()
        _PANO_CACHE[key] = pano
    return pano


def warm_panorama_cache(scene: Scene, resolution: tuple[int, int]) -> None:
    """Pre-generate both mode panoramas so mode switches never stall a
    live frame loop."""
    w, h = resolution
    _panorama(scene.seed, MODE_UGV, w, h)
    _panorama(scene.seed, MODE_UAV, w, h)


def _wrap360(angle: float) -> float:
    a = math.fmod(angle, 360.0)
    return a + 360.0 if a < 0 else a


def _ri(v: float) -> int:
    """Round half up, correct for negative values (int() truncates)."""
    return int(math.floor(v + 0.5))


def _clip_box(box: SpriteBox, w: int, h: int) -> tuple[tuple[int, int, int, int] | None, bool]:
    x0 = max(0, box.x)
    y0 = max(0, box.y)
    x1 = min(w, box.x + box.w)
    y1 = min(h, box.y + box.h)
    if x0 >= x1 or y0 >= y1:
        return None, False
    clipped = (x0, y0, x1 - x0, y1 - y0)
    full = (x0, y0, x1, y1) == (box.x, box.y, box.x + box.w, box.y + box.h)
    return clipped, full


def render_frame(
    scene: Scene, camera: CameraState, resolution: tuple[int, int] = (1900, 1000)
) -> FrameRender:
    w, h = resolution
    ppd_x, ppd_y = pixels_per_degree(w, h)
    pano = _panorama(scene.seed, camera.mode, w, h)
    ph, pw = pano.shape
    period = int(round(360.0 * ppd_x))

    if camera.mode == MODE_UGV:
        cx, cy, heading = camera.ugv_pose
        view_dir = heading + camera.pan
    else:
        cx, cy, _alt = camera.uav_pose
        view_dir = camera.pan

    # viewport centered on the view direction; column math is modulo the
    # 360-degree panorama period so sprites and background stay anchored
    pano_x0 = (_ri(_wrap360(view_dir) * ppd_x) - w // 2) % period
    pano_y0 = (ph - h) // 2 - _ri(camera.tilt * ppd_y)
    pano_y0 = min(max(pano_y0, 0), ph - h)
    img = pano[pano_y0 : pano_y0 + h, pano_x0 : pano_x0 + w].copy()

    truths: list[GroundTruth] = []
    horizon_pano_y = ph // 2

    if camera.mode == MODE_UGV:
        order = sorted(
            scene.entities,
            key=lambda e: -math.hypot(e.x - cx, e.y - cy),
        )
        for e in order:
            d = math.hypot(e.x - cx, e.y - cy)
            if d < 1.0:
                truths.append(GroundTruth(e.entity_id, e.kind, e.weapon, None, None, False))
                continue
            bearing = math.degrees(math.atan2(e.y - cy, e.x - cx))
            sprite_pano_x = _ri(_wrap360(bearing) * ppd_x)
            # nearest representative of the periodic panorama coordinate
            screen_x = (sprite_pano_x - pano_x0) % period
            if screen_x > (period + w) // 2:
                screen_x -= period
            height_px = _ri(FOCAL_FRAC * h * PERSON_HEIGHT_UNITS / d)
            feet_pano_y = horizon_pano_y + _ri(GROUND_DROP_FRAC * h / d)
            feet_y = feet_pano_y - pano_y0
            if height_px < 4 or screen_x < -height_px or screen_x > w + height_px:
                truths.append(GroundTruth(e.entity_id, e.kind, e.weapon, None, None, False))
                continue
            weapon = e.weapon if e.kind == PERSON_ARMED else None
            box = draw_person(img, screen_x, feet_y, height_px, e.facing, weapon)
            clipped, full = _clip_box(box, w, h)
            centroid = box.centroid if clipped else None
            truths.append(
                GroundTruth(e.entity_id, e.kind, e.weapon, clipped, centroid, full)
            )
    else:
        _, _, alt = camera.uav_pose
        ppu = h / UAV_VIEW_UNITS * (UAV_NOMINAL_ALT / max(alt, 1.0))
        for e in scene.entities:
            ex = _ri((e.x - cx) * ppu) + w // 2 - _ri(camera.pan * ppd_x)
            ey = _ri((e.y - cy) * ppu) + h // 2 - _ri(camera.tilt * ppd_y)
            size = max(4, _ri(1.9 * ppu))
            if ex < -size or ex > w + size or ey < -size or ey > h + size:
                truths.append(GroundTruth(e.entity_id, e.kind, e.weapon, None, None, False))
                continue
            weapon = e.weapon if e.kind == PERSON_ARMED else None
            box = draw_person_topdown(img, ex, ey, size, e.facing, weapon)
            clipped, full = _clip_box(box, w, h)
            centroid = box.centroid if clipped else None
            truths.append(
                GroundTruth(e.entity_id, e.kind, e.weapon, clipped, centroid, full)
            )
        truths.sort(key=lambda t: t.entity_id)
        return FrameRender(img, truths)

    truths.sort(key=lambda t: t.entity_id)
    return FrameRender(img, truths)
