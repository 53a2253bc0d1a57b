"""Shared raster helpers: validation, luma conversion, resizing.

Grayscale images are 2-D uint8 arrays (row-major, shape (h, w)); color
frames are (h, w, 3) uint8 RGB.
"""

from __future__ import annotations

import numpy as np

from .kernels import backend as _kern


def as_gray(img: np.ndarray) -> np.ndarray:
    """Validate a grayscale image and return it as a C-contiguous array."""
    a = np.asarray(img)
    if a.ndim != 2:
        raise ValueError(f"expected 2-D grayscale image, got shape {a.shape}")
    if a.dtype != np.uint8:
        raise ValueError(f"expected uint8 image, got {a.dtype}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"image dimensions must be >= 1, got {a.shape}")
    return np.ascontiguousarray(a)


def as_rgb(img: np.ndarray) -> np.ndarray:
    a = np.asarray(img)
    if a.ndim != 3 or a.shape[2] != 3 or a.dtype != np.uint8:
        raise ValueError(f"expected (h, w, 3) uint8 RGB frame, got {a.shape} {a.dtype}")
    return np.ascontiguousarray(a)


def luma_bt601(rgb: np.ndarray) -> np.ndarray:
    """Convert an RGB frame to 8-bit luma (BT.601 weights, rounded half up)."""
    return _kern.luma_bt601(as_rgb(rgb))


def gray_to_rgb(gray: np.ndarray) -> np.ndarray:
    g = as_gray(gray)
    return np.repeat(g[:, :, None], 3, axis=2)


def box_downscale(img: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    """Downscale by box averaging over integer-edge boxes, rounded half up.

    Output pixel (X, Y) averages the input box spanned by
    [floor(X*w/out_w), floor((X+1)*w/out_w)) x the analogous row range.
    """
    g = as_gray(img)
    h, w = g.shape
    if not (1 <= out_w <= w and 1 <= out_h <= h):
        raise ValueError(f"downscale target {out_w}x{out_h} outside source {w}x{h}")
    return _kern.box_downscale_u8(g, out_h, out_w)


def resize_bilinear(img: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    """Bilinear resize with pixel-center sampling, rounded half up to uint8.

    Sampling uses src = (dst + 0.5) * (in/out) - 0.5 with edge clamping,
    so a same-size resize is a byte-identical copy.
    """
    g = as_gray(img)
    h, w = g.shape
    if out_w < 1 or out_h < 1:
        raise ValueError("resize target must be at least 1x1")

    sx = w / out_w
    sy = h / out_h
    xs = (np.arange(out_w) + 0.5) * sx - 0.5
    ys = (np.arange(out_h) + 0.5) * sy - 0.5
    x0 = np.floor(xs).astype(np.int64)
    y0 = np.floor(ys).astype(np.int64)
    fx = xs - x0
    fy = ys - y0
    x0c = np.clip(x0, 0, w - 1)
    x1c = np.clip(x0 + 1, 0, w - 1)
    y0c = np.clip(y0, 0, h - 1)
    y1c = np.clip(y0 + 1, 0, h - 1)

    src = g.astype(np.float64)
    top = src[y0c][:, x0c] * (1 - fx) + src[y0c][:, x1c] * fx
    bot = src[y1c][:, x0c] * (1 - fx) + src[y1c][:, x1c] * fx
    out = top * (1 - fy)[:, None] + bot * fy[:, None]
    return np.ascontiguousarray(np.floor(out + 0.5).clip(0, 255).astype(np.uint8))
