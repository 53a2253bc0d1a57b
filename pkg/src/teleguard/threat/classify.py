"""Eight-class threat scoring: the plugin contract, softmax, and verdicts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, Sequence, runtime_checkable

import numpy as np

from .roi import RoiImage

LABELS: tuple[str, ...] = (
    "no_weapon",
    "assault_rifle",
    "revolver",
    "pistol",
    "shotgun",
    "submachine_gun",
    "sniper_rifle",
    "machine_gun",
)
N_CLASSES = len(LABELS)

GREEN = "GREEN"
RED = "RED"


class ClassifierUnavailableError(RuntimeError):
    """A plugin failed or produced output violating the score contract."""


@dataclass(frozen=True)
class ClassScores:
    probabilities: np.ndarray

    def __post_init__(self) -> None:
        p = self.probabilities
        if p.shape != (N_CLASSES,):
            raise ValueError(f"need {N_CLASSES} probabilities, got shape {p.shape}")
        if not np.isfinite(p).all() or (p < 0).any() or (p > 1).any():
            raise ValueError("probabilities must be finite and within [0, 1]")
        if abs(float(p.sum()) - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {float(p.sum())}, not 1")

    @property
    def argmax_label(self) -> str:
        return LABELS[int(np.argmax(self.probabilities))]

    def prob(self, label: str) -> float:
        return float(self.probabilities[LABELS.index(label)])


@dataclass(frozen=True)
class ThreatVerdict:
    threat_probability: float
    percent: int
    color: str
    label: str


@runtime_checkable
class ClassifierPlugin(Protocol):
    """In-process classifier contract: ROI pixels in, 8 probabilities out."""

    thread_safe: bool

    def predict(self, roi: RoiImage) -> Sequence[float]: ...


def softmax(logits: Sequence[float]) -> ClassScores:
    """Stable softmax over the 8 class logits."""
    arr = np.asarray(logits, dtype=np.float64)
    if arr.shape != (N_CLASSES,):
        raise ValueError(f"need {N_CLASSES} logits, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError("logits must be finite")
    e = np.exp(arr - arr.max())
    return ClassScores(e / e.sum())


def classify(roi: RoiImage, plugin: ClassifierPlugin) -> ClassScores:
    """Delegate to the plugin and enforce the score invariants on whatever
    comes back; contract violations surface as ClassifierUnavailableError."""
    try:
        raw = plugin.predict(roi)
        arr = np.asarray(list(raw), dtype=np.float64)
        return ClassScores(arr)
    except ClassifierUnavailableError:
        raise
    except Exception as e:
        raise ClassifierUnavailableError(f"plugin {type(plugin).__name__}: {e}") from e


def verdict(scores: ClassScores, threshold: float = 0.5) -> ThreatVerdict:
    """Threat probability is the complement of the no-weapon probability;
    RED at/above the threshold, percent rounded half up."""
    threat = 1.0 - scores.prob("no_weapon")
    percent = int(np.floor(100.0 * threat + 0.5))
    color = RED if threat >= threshold else GREEN
    return ThreatVerdict(threat, percent, color, scores.argmax_label)


class StubClassifier:
    """Fixed-output plugin, optionally loaded from a text file of 8 values."""

    thread_safe = True

    def __init__(self, probabilities: Sequence[float]):
        self._probs = [float(p) for p in probabilities]

    @classmethod
    def from_file(cls, path: str) -> "StubClassifier":
        with open(path, "r", encoding="ascii") as f:
            values = [float(tok) for tok in f.read().split()]
        return cls(values)

    def predict(self, roi: RoiImage) -> Sequence[float]:
        return self._probs


class FailingClassifier:
    """Always raises; used to exercise the UNKNOWN-verdict path."""

    thread_safe = True

    def predict(self, roi: RoiImage) -> Sequence[float]:
        raise RuntimeError("classifier backend offline")
