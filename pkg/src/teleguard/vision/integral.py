"""Integral image (summed-area table) and constant-time rectangle sums."""

from __future__ import annotations

import numpy as np

from ..image import as_gray


def integral_image(img: np.ndarray) -> np.ndarray:
    """Build the (h+1, w+1) uint64 cumulative-sum table.

    Entry (y, x) is the sum of all pixels strictly above and to the left,
    so row 0 and column 0 are zero.
    """
    g = as_gray(img)
    h, w = g.shape
    ii = np.zeros((h + 1, w + 1), dtype=np.uint64)
    np.cumsum(np.cumsum(g, axis=0, dtype=np.uint64), axis=1, out=ii[1:, 1:])
    return ii


def rect_sum(ii: np.ndarray, x: int, y: int, w: int, h: int) -> int:
    """Exact pixel sum over the rectangle via four table lookups."""
    ih = ii.shape[0] - 1
    iw = ii.shape[1] - 1
    if w < 0 or h < 0:
        raise ValueError(f"rect size must be non-negative, got {w}x{h}")
    if x < 0 or y < 0 or x + w > iw or y + h > ih:
        raise ValueError(
            f"rect ({x},{y},{w},{h}) outside image bounds {iw}x{ih}"
        )
    if w == 0 or h == 0:
        return 0
    a = int(ii[y + h, x + w])
    b = int(ii[y, x + w])
    c = int(ii[y + h, x])
    d = int(ii[y, x])
    return a - b - c + d
