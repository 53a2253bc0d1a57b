"""Built-in 5x7 bitmap font (digits plus the few symbols the HUD needs)."""

from __future__ import annotations

import numpy as np

_GLYPHS = {
    "0": ("01110", "10001", "10011", "10101", "11001", "10001", "01110"),
    "1": ("00100", "01100", "00100", "00100", "00100", "00100", "01110"),
    "2": ("01110", "10001", "00001", "00010", "00100", "01000", "11111"),
    "3": ("11111", "00010", "00100", "00010", "00001", "10001", "01110"),
    "4": ("00010", "00110", "01010", "10010", "11111", "00010", "00010"),
    "5": ("11111", "10000", "11110", "00001", "00001", "10001", "01110"),
    "6": ("00110", "01000", "10000", "11110", "10001", "10001", "01110"),
    "7": ("11111", "00001", "00010", "00100", "01000", "01000", "01000"),
    "8": ("01110", "10001", "10001", "01110", "10001", "10001", "01110"),
    "9": ("01110", "10001", "10001", "01111", "00001", "00010", "01100"),
    "%": ("11000", "11001", "00010", "00100", "01000", "10011", "00011"),
    "?": ("01110", "10001", "00001", "00010", "00100", "00000", "00100"),
    "-": ("00000", "00000", "00000", "11111", "00000", "00000", "00000"),
}

GLYPH_W = 5
GLYPH_H = 7

_MASKS = {
    ch: np.array([[c == "1" for c in row] for row in rows], dtype=bool)
    for ch, rows in _GLYPHS.items()
}


def glyph_mask(ch: str) -> np.ndarray:
    return _MASKS.get(ch, _MASKS["?"])


def text_mask(text: str, scale: int = 1) -> np.ndarray:
    """Boolean raster of the string with 1-column spacing, scaled up."""
    if not text:
        return np.zeros((GLYPH_H, 0), dtype=bool)
    cols = len(text) * (GLYPH_W + 1) - 1
    mask = np.zeros((GLYPH_H, cols), dtype=bool)
    for i, ch in enumerate(text):
        x = i * (GLYPH_W + 1)
        mask[:, x : x + GLYPH_W] = glyph_mask(ch)
    if scale > 1:
        mask = np.repeat(np.repeat(mask, scale, axis=0), scale, axis=1)
    return mask
