"""Deterministic reference classifier: HOG features + 8-way linear layer.

Weights are fitted offline (scripts/build_models.py) on the simulator's
labeled sprite corpus and committed under teleguard/models/.
"""

from __future__ import annotations

from importlib import resources
from typing import Sequence

import numpy as np

from ..image import resize_bilinear
from ..vision.haar import ModelFormatError
from ..vision.hog import HogParams
from ..kernels import backend as _kern
from .classify import N_CLASSES
from .roi import RoiImage

REFCLF_RESOURCE = "reference_classifier_v1.txt"

_HOG = HogParams()  # 64x128 window applied to the downscaled ROI


def roi_features(pixels: np.ndarray, params: HogParams = _HOG) -> np.ndarray:
    small = resize_bilinear(pixels, params.window_w, params.window_h)
    return _kern.hog_descriptor_f64(
        small, params.cell, params.bins, params.clip, params.epsilon
    )


class ReferenceClassifier:
    """Stateless and deterministic: same ROI bytes, same probabilities."""

    thread_safe = True

    def __init__(self, weights: np.ndarray, bias: np.ndarray, params: HogParams = _HOG):
        if weights.shape != (N_CLASSES, params.descriptor_len):
            raise ValueError(
                f"weights must be {N_CLASSES}x{params.descriptor_len}, got {weights.shape}"
            )
        if bias.shape != (N_CLASSES,):
            raise ValueError(f"bias must have {N_CLASSES} entries, got {bias.shape}")
        self.weights = weights
        self.bias = bias
        self.params = params

    def logits(self, pixels: np.ndarray) -> np.ndarray:
        return self.weights @ roi_features(pixels, self.params) + self.bias

    def predict(self, roi: RoiImage) -> Sequence[float]:
        z = self.logits(roi.pixels)
        e = np.exp(z - z.max())
        return e / e.sum()

    @classmethod
    def load(cls, path: str) -> "ReferenceClassifier":
        with open(path, "r", encoding="ascii") as f:
            raw = f.readlines()
        lines = [
            (i + 1, ln.strip())
            for i, ln in enumerate(raw)
            if ln.strip() and not ln.lstrip().startswith("#")
        ]
        if not lines:
            raise ModelFormatError("line 1: empty reference model file")
        lineno, header = lines[0]
        parts = header.split()
        if len(parts) != 4 or parts[0] != "refclf" or parts[1] != "v1":
            raise ModelFormatError(
                f"line {lineno}: expected 'refclf v1 <descriptor_len> 8' header"
            )
        try:
            dlen, nclasses = int(parts[2]), int(parts[3])
        except ValueError:
            raise ModelFormatError(f"line {lineno}: bad header numbers") from None
        if nclasses != N_CLASSES:
            raise ModelFormatError(f"line {lineno}: model must have {N_CLASSES} classes")
        if len(lines) != 1 + nclasses + 1:
            raise ModelFormatError(
                f"line {lines[-1][0]}: expected {nclasses} weight rows plus a bias row"
            )
        weights = np.empty((nclasses, dlen))
        for c in range(nclasses):
            lineno, row = lines[1 + c]
            vals = row.split()
            if len(vals) != dlen:
                raise ModelFormatError(
                    f"line {lineno}: weight row has {len(vals)} values, expected {dlen}"
                )
            try:
                weights[c] = [float(v) for v in vals]
            except ValueError as e:
                raise ModelFormatError(f"line {lineno}: bad weight: {e}") from None
        lineno, row = lines[1 + nclasses]
        vals = row.split()
        if len(vals) != nclasses:
            raise ModelFormatError(
                f"line {lineno}: bias row has {len(vals)} values, expected {nclasses}"
            )
        bias = np.asarray([float(v) for v in vals])
        return cls(weights, bias)

    @classmethod
    def load_default(cls) -> "ReferenceClassifier":
        ref = resources.files("teleguard") / "models" / REFCLF_RESOURCE
        with resources.as_file(ref) as path:
            return cls.load(str(path))

    def save(self, path: str) -> None:
        out = [f"refclf v1 {self.weights.shape[1]} {N_CLASSES}"]
        for c in range(N_CLASSES):
            out.append(" ".join(f"{v:.8g}" for v in self.weights[c]))
        out.append(" ".join(f"{v:.8g}" for v in self.bias))
        with open(path, "w", encoding="ascii") as f:
            f.write("\n".join(out) + "\n")
