"""HOG descriptors and linear SVM scoring."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..image import as_gray
from ..kernels import backend as _kern
from .haar import ModelFormatError


@dataclass(frozen=True)
class HogParams:
    """Descriptor layout: gradient-orientation histograms over square cells,
    aggregated into overlapping 2x2-cell blocks at 1-cell stride.

    Gradients are centered differences with indices clamped at the window
    border. Unsigned orientation over [0, 180) is split between the two
    nearest bin centers (linear interpolation, wrapping). Each block is
    L2-normalized with epsilon added in quadrature, clipped, renormalized
    the same way (L2-Hys). Block vectors concatenate row-major as
    (block_y, block_x, cell_y, cell_x, bin).
    """

    cell: int = 8
    bins: int = 9
    clip: float = 0.2
    epsilon: float = 1e-5
    window_w: int = 64
    window_h: int = 128

    def __post_init__(self) -> None:
        if self.window_w % self.cell or self.window_h % self.cell:
            raise ValueError(
                f"window {self.window_w}x{self.window_h} not divisible by cell {self.cell}"
            )
        if self.window_w < 2 * self.cell or self.window_h < 2 * self.cell:
            raise ValueError("window must span at least 2x2 cells")

    @property
    def cells_x(self) -> int:
        return self.window_w // self.cell

    @property
    def cells_y(self) -> int:
        return self.window_h // self.cell

    @property
    def descriptor_len(self) -> int:
        return (self.cells_x - 1) * (self.cells_y - 1) * 4 * self.bins


def hog_descriptor(window: np.ndarray, params: HogParams = HogParams()) -> np.ndarray:
    g = as_gray(window)
    if g.shape != (params.window_h, params.window_w):
        raise ValueError(
            f"window is {g.shape[1]}x{g.shape[0]}, params want "
            f"{params.window_w}x{params.window_h}"
        )
    return _kern.hog_descriptor_f64(
        g, params.cell, params.bins, params.clip, params.epsilon
    )


@dataclass(frozen=True)
class LinearSvmModel:
    weights: np.ndarray
    bias: float
    threshold: float = 0.0


def svm_score(descriptor: np.ndarray, model: LinearSvmModel) -> float:
    d = np.asarray(descriptor, dtype=np.float64)
    if d.shape != model.weights.shape:
        raise ValueError(
            f"descriptor length {d.shape} does not match weights {model.weights.shape}"
        )
    return float(np.dot(model.weights, d)) + model.bias


def load_svm(path: str) -> LinearSvmModel:
    """Parse the SVM model format: `svm v1 <len>` header, then <len> weight
    values over any number of lines, then `bias <v>` and `threshold <v>`."""
    with open(path, "r", encoding="ascii") as f:
        raw = f.readlines()
    lines = [
        (i + 1, ln.strip())
        for i, ln in enumerate(raw)
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not lines:
        raise ModelFormatError("line 1: empty svm model file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 3 or parts[0] != "svm" or parts[1] != "v1":
        raise ModelFormatError(f"line {lineno}: expected 'svm v1 <len>' header")
    try:
        n = int(parts[2])
    except ValueError:
        raise ModelFormatError(f"line {lineno}: bad descriptor length {parts[2]!r}") from None
    if n < 1:
        raise ModelFormatError(f"line {lineno}: descriptor length must be >= 1")

    weights = np.empty(n, dtype=np.float64)
    got = 0
    bias = None
    threshold = 0.0
    for lineno, line in lines[1:]:
        parts = line.split()
        if parts[0] == "bias":
            if got != n:
                raise ModelFormatError(
                    f"line {lineno}: bias after {got} weights, expected {n}"
                )
            if len(parts) != 2:
                raise ModelFormatError(f"line {lineno}: 'bias' needs 1 field")
            bias = float(parts[0 + 1])
            continue
        if parts[0] == "threshold":
            if len(parts) != 2:
                raise ModelFormatError(f"line {lineno}: 'threshold' needs 1 field")
            threshold = float(parts[1])
            continue
        for tok in parts:
            if got >= n:
                raise ModelFormatError(
                    f"line {lineno}: more than {n} weight values"
                )
            try:
                weights[got] = float(tok)
            except ValueError:
                raise ModelFormatError(f"line {lineno}: bad weight {tok!r}") from None
            got += 1
    if got != n:
        raise ModelFormatError(f"line {len(raw)}: got {got} weights, expected {n}")
    if bias is None:
        raise ModelFormatError(f"line {len(raw)}: missing 'bias' record")
    return LinearSvmModel(weights, bias, threshold)


def save_svm(model: LinearSvmModel, path: str) -> None:
    out = [f"svm v1 {model.weights.size}"]
    w = model.weights
    for i in range(0, w.size, 16):
        out.append(" ".join(f"{v:.9g}" for v in w[i : i + 16]))
    out.append(f"bias {float(model.bias)!r}")
    out.append(f"threshold {float(model.threshold)!r}")
    with open(path, "w", encoding="ascii") as f:
        f.write("\n".join(out) + "\n")
