"""Haar-like features and stump-stage cascade evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .integral import rect_sum


class ModelFormatError(ValueError):
    """Raised on malformed detector model files; message carries the line number."""


@dataclass(frozen=True)
class WeightedRect:
    x: int
    y: int
    w: int
    h: int
    weight: float


@dataclass(frozen=True)
class HaarFeature:
    """Weighted difference of rectangular sums inside a detection window."""

    rects: tuple[WeightedRect, ...]
    window_w: int
    window_h: int

    def __post_init__(self) -> None:
        if len(self.rects) < 2:
            raise ValueError("a Haar feature needs at least 2 rects")
        signs = {r.weight > 0 for r in self.rects}
        if len(signs) < 2:
            raise ValueError("rect weights must not all share one sign")
        for r in self.rects:
            if r.w <= 0 or r.h <= 0:
                raise ValueError(f"rect {r} has non-positive size")
            if r.x < 0 or r.y < 0 or r.x + r.w > self.window_w or r.y + r.h > self.window_h:
                raise ValueError(f"rect {r} outside {self.window_w}x{self.window_h} window")


@dataclass(frozen=True)
class WeakClassifier:
    feature: HaarFeature
    split_threshold: float
    left_value: float
    right_value: float


@dataclass(frozen=True)
class CascadeStage:
    threshold: float
    weak_classifiers: tuple[WeakClassifier, ...]


@dataclass(frozen=True)
class CascadeModel:
    window_w: int
    window_h: int
    stages: tuple[CascadeStage, ...]

    def __post_init__(self) -> None:
        if not self.stages:
            raise ValueError("cascade must have at least one stage")


@dataclass(frozen=True)
class CascadeDecision:
    accepted: bool
    stages_evaluated: int
    margin: float


def _scaled(v: float) -> int:
    return int(v + 0.5) if v >= 0 else -int(-v + 0.5)


def haar_feature_value(
    ii: np.ndarray, feature: HaarFeature, origin: tuple[int, int], scale: float = 1.0
) -> float:
    """Sum of weight * rect_sum over the feature's rects, scaled and offset.

    Scaled rect coordinates are rounded half away from zero; each rect
    costs exactly four table lookups.
    """
    ox, oy = origin
    total = 0.0
    for r in feature.rects:
        total += r.weight * rect_sum(
            ii,
            ox + _scaled(r.x * scale),
            oy + _scaled(r.y * scale),
            _scaled(r.w * scale),
            _scaled(r.h * scale),
        )
    return total


def evaluate_cascade(
    ii: np.ndarray, model: CascadeModel, origin: tuple[int, int], scale: float = 1.0
) -> CascadeDecision:
    """Run stages in order, rejecting as soon as a stage score falls below
    its threshold.

    A weak classifier votes left_value when its feature value is below
    split_threshold * scale^2 (raw sums grow with window area), else
    right_value. The margin accumulates (stage score - stage threshold)
    over passed stages and serves as the detection score.
    """
    area_scale = scale * scale
    margin = 0.0
    for i, stage in enumerate(model.stages):
        score = 0.0
        for weak in stage.weak_classifiers:
            v = haar_feature_value(ii, weak.feature, origin, scale)
            score += (
                weak.left_value
                if v < weak.split_threshold * area_scale
                else weak.right_value
            )
        if score < stage.threshold:
            return CascadeDecision(False, i + 1, margin)
        margin += score - stage.threshold
    return CascadeDecision(True, len(model.stages), margin)


@dataclass
class CascadeArrays:
    """Flattened cascade for the sweep kernels."""

    stage_thr: np.ndarray
    stage_start: np.ndarray
    weak_split: np.ndarray
    weak_left: np.ndarray
    weak_right: np.ndarray
    rect_start: np.ndarray
    rect_x: np.ndarray
    rect_y: np.ndarray
    rect_w: np.ndarray
    rect_h: np.ndarray
    rect_wt: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False)


def flatten_cascade(model: CascadeModel) -> CascadeArrays:
    stage_thr = []
    stage_start = [0]
    weak_split = []
    weak_left = []
    weak_right = []
    rect_start = [0]
    rx, ry, rw, rh, rwt = [], [], [], [], []
    for stage in model.stages:
        stage_thr.append(stage.threshold)
        for weak in stage.weak_classifiers:
            weak_split.append(weak.split_threshold)
            weak_left.append(weak.left_value)
            weak_right.append(weak.right_value)
            for r in weak.feature.rects:
                rx.append(r.x)
                ry.append(r.y)
                rw.append(r.w)
                rh.append(r.h)
                rwt.append(r.weight)
            rect_start.append(len(rx))
        stage_start.append(len(weak_split))
    return CascadeArrays(
        stage_thr=np.asarray(stage_thr, np.float64),
        stage_start=np.asarray(stage_start, np.int32),
        weak_split=np.asarray(weak_split, np.float64),
        weak_left=np.asarray(weak_left, np.float64),
        weak_right=np.asarray(weak_right, np.float64),
        rect_start=np.asarray(rect_start, np.int32),
        rect_x=np.asarray(rx, np.int32),
        rect_y=np.asarray(ry, np.int32),
        rect_w=np.asarray(rw, np.int32),
        rect_h=np.asarray(rh, np.int32),
        rect_wt=np.asarray(rwt, np.float64),
    )


def _parse_fields(line: str, lineno: int, tag: str, n: int) -> list[str]:
    parts = line.split()
    if not parts or parts[0] != tag:
        raise ModelFormatError(f"line {lineno}: expected '{tag}' record, got {line!r}")
    if len(parts) != n + 1:
        raise ModelFormatError(
            f"line {lineno}: '{tag}' needs {n} fields, got {len(parts) - 1}"
        )
    return parts[1:]


def load_cascade(path: str) -> CascadeModel:
    """Parse the line-oriented cascade model format.

    Header `cascade v1 <win_w> <win_h> <n_stages>`, then per stage a
    `stage <threshold> <n_weak>` line, per weak a
    `weak <split> <left> <right> <n_rects>` line followed by n_rects
    `rect <x> <y> <w> <h> <weight>` lines. Blank lines and lines starting
    with '#' are ignored.
    """
    with open(path, "r", encoding="ascii") as f:
        raw = f.readlines()
    lines = [
        (i + 1, ln.strip())
        for i, ln in enumerate(raw)
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    pos = 0

    def take(tag: str, n: int) -> tuple[int, list[str]]:
        nonlocal pos
        if pos >= len(lines):
            raise ModelFormatError(f"line {len(raw) + 1}: unexpected end of file, wanted '{tag}'")
        lineno, line = lines[pos]
        pos += 1
        return lineno, _parse_fields(line, lineno, tag, n)

    lineno, hdr = take("cascade", 4)
    if hdr[0] != "v1":
        raise ModelFormatError(f"line {lineno}: unsupported cascade version {hdr[0]!r}")
    try:
        win_w, win_h, n_stages = int(hdr[1]), int(hdr[2]), int(hdr[3])
    except ValueError as e:
        raise ModelFormatError(f"line {lineno}: bad header numbers: {e}") from None
    if n_stages < 1:
        raise ModelFormatError(f"line {lineno}: cascade needs >= 1 stage")

    stages = []
    for _ in range(n_stages):
        lineno, sf = take("stage", 2)
        try:
            threshold, n_weak = float(sf[0]), int(sf[1])
        except ValueError as e:
            raise ModelFormatError(f"line {lineno}: bad stage record: {e}") from None
        weaks = []
        for _ in range(n_weak):
            lineno, wf = take("weak", 4)
            try:
                split, left, right, n_rects = (
                    float(wf[0]),
                    float(wf[1]),
                    float(wf[2]),
                    int(wf[3]),
                )
            except ValueError as e:
                raise ModelFormatError(f"line {lineno}: bad weak record: {e}") from None
            rects = []
            for _ in range(n_rects):
                lineno, rf = take("rect", 5)
                try:
                    rects.append(
                        WeightedRect(
                            int(rf[0]), int(rf[1]), int(rf[2]), int(rf[3]), float(rf[4])
                        )
                    )
                except ValueError as e:
                    raise ModelFormatError(f"line {lineno}: bad rect record: {e}") from None
            try:
                feature = HaarFeature(tuple(rects), win_w, win_h)
            except ValueError as e:
                raise ModelFormatError(f"line {lineno}: {e}") from None
            weaks.append(WeakClassifier(feature, split, left, right))
        stages.append(CascadeStage(threshold, tuple(weaks)))
    if pos != len(lines):
        lineno, line = lines[pos]
        raise ModelFormatError(f"line {lineno}: trailing content {line!r}")
    return CascadeModel(win_w, win_h, tuple(stages))


def save_cascade(model: CascadeModel, path: str) -> None:
    out = [f"cascade v1 {model.window_w} {model.window_h} {len(model.stages)}"]
    for stage in model.stages:
        out.append(f"stage {float(stage.threshold)!r} {len(stage.weak_classifiers)}")
        for weak in stage.weak_classifiers:
            out.append(
                f"weak {float(weak.split_threshold)!r} {float(weak.left_value)!r} "
                f"{float(weak.right_value)!r} {len(weak.feature.rects)}"
            )
            for r in weak.feature.rects:
                out.append(f"rect {r.x} {r.y} {r.w} {r.h} {float(r.weight)!r}")
    with open(path, "w", encoding="ascii") as f:
        f.write("\n".join(out) + "\n")
