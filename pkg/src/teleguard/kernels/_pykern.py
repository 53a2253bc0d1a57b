"""Pure-Python (numpy) implementations of the hot kernels.

Selected at import time by :mod:`teleguard.kernels` when the compiled
extension is unavailable or disabled. Integer-output kernels here define
the bit-exact semantics the compiled backend must reproduce.
"""

from __future__ import annotations

import numpy as np

NAME = "python"


def luma_bt601(rgb: np.ndarray) -> np.ndarray:
    r = rgb[:, :, 0].astype(np.uint32)
    g = rgb[:, :, 1].astype(np.uint32)
    b = rgb[:, :, 2].astype(np.uint32)
    return ((299 * r + 587 * g + 114 * b + 500) // 1000).astype(np.uint8)


def box_downscale_u8(img: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    h, w = img.shape
    ii = np.zeros((h + 1, w + 1), np.uint64)
    np.cumsum(np.cumsum(img, axis=0, dtype=np.uint64), axis=1, out=ii[1:, 1:])
    xe = (np.arange(out_w + 1, dtype=np.int64) * w) // out_w
    ye = (np.arange(out_h + 1, dtype=np.int64) * h) // out_h
    s = ii[np.ix_(ye, xe)].astype(np.int64)
    box = s[1:, 1:] - s[:-1, 1:] - s[1:, :-1] + s[:-1, :-1]
    cnt = (ye[1:] - ye[:-1])[:, None] * (xe[1:] - xe[:-1])[None, :]
    return ((2 * box + cnt) // (2 * cnt)).astype(np.uint8)


def blur_u8(img: np.ndarray, kx: np.ndarray, ky: np.ndarray) -> np.ndarray:
    h, w = img.shape
    rx = len(kx) // 2
    ry = len(ky) // 2
    src = img.astype(np.float64)
    padded = np.pad(src, ((0, 0), (rx, rx)), mode="edge")
    tmp = np.zeros((h, w))
    for i, kv in enumerate(kx):
        tmp += kv * padded[:, i : i + w]
    padded = np.pad(tmp, ((ry, ry), (0, 0)), mode="edge")
    out = np.zeros((h, w))
    for j, kv in enumerate(ky):
        out += kv * padded[j : j + h, :]
    return np.floor(out + 0.5).clip(0, 255).astype(np.uint8)


def sbs_half_rgb(frame: np.ndarray) -> np.ndarray:
    a = frame[:, 0::2, :].astype(np.uint16)
    b = frame[:, 1::2, :].astype(np.uint16)
    half = ((a + b + 1) >> 1).astype(np.uint8)
    return np.ascontiguousarray(np.concatenate([half, half], axis=1))


def cascade_sweep(
    ii: np.ndarray,
    win_w: int,
    win_h: int,
    stride: int,
    stage_thr: np.ndarray,
    stage_start: np.ndarray,
    weak_split: np.ndarray,
    weak_left: np.ndarray,
    weak_right: np.ndarray,
    rect_start: np.ndarray,
    rect_x: np.ndarray,
    rect_y: np.ndarray,
    rect_w: np.ndarray,
    rect_h: np.ndarray,
    rect_wt: np.ndarray,
):
    """Evaluate the cascade at every stride-aligned window origin.

    Returns (xs, ys, scores) for accepted windows in row-major order. The
    score is the accumulated stage margin plus the bottleneck clearance:
    the minimum, over every weak feature, of the feature's distance past
    its split (signed by the favorable vote direction, normalized by the
    split magnitude). Accepted windows usually share one discrete margin,
    so the continuous bottleneck term is what lets suppression prefer the
    best-framed window across positions and pyramid levels.
    """
    h = ii.shape[0] - 1
    w = ii.shape[1] - 1
    xs = np.arange(0, w - win_w + 1, stride, dtype=np.int64)
    ys = np.arange(0, h - win_h + 1, stride, dtype=np.int64)
    if xs.size == 0 or ys.size == 0:
        return (np.zeros(0, np.int32), np.zeros(0, np.int32), np.zeros(0, np.float64))
    gx, gy = np.meshgrid(xs, ys)
    ox = gx.ravel()
    oy = gy.ravel()
    iis = ii.astype(np.int64)
    alive = np.ones(ox.size, dtype=bool)
    margin = np.zeros(ox.size, dtype=np.float64)
    bottleneck = np.full(ox.size, np.inf)
    for s in range(stage_thr.size):
        idx = np.nonzero(alive)[0]
        if idx.size == 0:
            break
        axo = ox[idx]
        ayo = oy[idx]
        score = np.zeros(idx.size, dtype=np.float64)
        for k in range(stage_start[s], stage_start[s + 1]):
            val = np.zeros(idx.size, dtype=np.float64)
            for r in range(rect_start[k], rect_start[k + 1]):
                x0 = axo + rect_x[r]
                y0 = ayo + rect_y[r]
                x1 = x0 + rect_w[r]
                y1 = y0 + rect_h[r]
                val += rect_wt[r] * (
                    iis[y1, x1] - iis[y0, x1] - iis[y1, x0] + iis[y0, x0]
                )
            score += np.where(val < weak_split[k], weak_left[k], weak_right[k])
            sign = 1.0 if weak_right[k] >= weak_left[k] else -1.0
            ratio = sign * (val - weak_split[k]) / (abs(weak_split[k]) + 1.0)
            bottleneck[idx] = np.minimum(bottleneck[idx], ratio)
        passed = score >= stage_thr[s]
        margin[idx[passed]] += score[passed] - stage_thr[s]
        alive[idx[~passed]] = False
    sel = np.nonzero(alive)[0]
    final = margin[sel] + np.where(np.isfinite(bottleneck[sel]), bottleneck[sel], 0.0)
    return (ox[sel].astype(np.int32), oy[sel].astype(np.int32), final)


def hog_descriptor_f64(
    win: np.ndarray, cell: int, nbins: int, clip: float, eps: float
) -> np.ndarray:
    h, w = win.shape
    src = win.astype(np.float64)
    xi = np.arange(w)
    yi = np.arange(h)
    gx = src[:, np.clip(xi + 1, 0, w - 1)] - src[:, np.clip(xi - 1, 0, w - 1)]
    gy = src[np.clip(yi + 1, 0, h - 1), :] - src[np.clip(yi - 1, 0, h - 1), :]
    mag = np.hypot(gx, gy)
    ang = np.degrees(np.arctan2(gy, gx)) % 180.0

    bw = 180.0 / nbins
    b = ang / bw - 0.5
    b0 = np.floor(b).astype(np.int64)
    frac = b - b0
    cy = h // cell
    cx = w // cell
    cell_row = (yi // cell)[:, None] * cx + (xi // cell)[None, :]
    hist = np.zeros(cy * cx * nbins)
    flat0 = cell_row * nbins + (b0 % nbins)
    flat1 = cell_row * nbins + ((b0 + 1) % nbins)
    np.add.at(hist, flat0.ravel(), (mag * (1.0 - frac)).ravel())
    np.add.at(hist, flat1.ravel(), (mag * frac).ravel())
    hist = hist.reshape(cy, cx, nbins)

    out = np.empty((cy - 1, cx - 1, 4 * nbins))
    for by in range(cy - 1):
        for bx in range(cx - 1):
            v = hist[by : by + 2, bx : bx + 2, :].ravel()
            v = v / np.sqrt(np.dot(v, v) + eps * eps)
            v = np.minimum(v, clip)
            v = v / np.sqrt(np.dot(v, v) + eps * eps)
            out[by, bx, :] = v
    return out.ravel()


def hog_sweep(
    level: np.ndarray,
    win_w: int,
    win_h: int,
    stride: int,
    cell: int,
    nbins: int,
    clip: float,
    eps: float,
    weights: np.ndarray,
    bias: float,
    threshold: float,
):
    """Score every stride-aligned window with HOG + linear SVM.

    Returns (xs, ys, scores) for windows scoring above threshold, in
    row-major order. Gradients are computed per window with the window's
    own clamped borders, matching hog_descriptor_f64 exactly.
    """
    h, w = level.shape
    out_x = []
    out_y = []
    out_s = []
    for y in range(0, h - win_h + 1, stride):
        for x in range(0, w - win_w + 1, stride):
            d = hog_descriptor_f64(
                level[y : y + win_h, x : x + win_w], cell, nbins, clip, eps
            )
            s = float(np.dot(weights, d)) + bias
            if s > threshold:
                out_x.append(x)
                out_y.append(y)
                out_s.append(s)
    return (
        np.asarray(out_x, np.int32),
        np.asarray(out_y, np.int32),
        np.asarray(out_s, np.float64),
    )
