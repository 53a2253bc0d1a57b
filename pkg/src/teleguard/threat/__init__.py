"""ROI preparation and the 8-class threat classification contract."""

from .classify import (
    GREEN,
    LABELS,
    N_CLASSES,
    RED,
    ClassifierPlugin,
    ClassifierUnavailableError,
    ClassScores,
    FailingClassifier,
    StubClassifier,
    ThreatVerdict,
    classify,
    softmax,
    verdict,
)
from .reference import ReferenceClassifier, roi_features
from .roi import ROI_SIZE, RoiImage, extract_and_resize

__all__ = [
    "GREEN",
    "LABELS",
    "N_CLASSES",
    "RED",
    "ROI_SIZE",
    "ClassScores",
    "ClassifierPlugin",
    "ClassifierUnavailableError",
    "FailingClassifier",
    "ReferenceClassifier",
    "RoiImage",
    "StubClassifier",
    "ThreatVerdict",
    "classify",
    "extract_and_resize",
    "roi_features",
    "softmax",
    "verdict",
]
