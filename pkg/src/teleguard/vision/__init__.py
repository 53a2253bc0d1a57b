"""Image-processing and detection primitives."""

from .detect import Detection, PyramidParams, non_max_suppression, sliding_window_detect
from .gaussian import GaussianKernelParams, gaussian_blur, gaussian_kernel
from .haar import (
    CascadeDecision,
    CascadeModel,
    CascadeStage,
    HaarFeature,
    ModelFormatError,
    WeakClassifier,
    WeightedRect,
    evaluate_cascade,
    haar_feature_value,
    load_cascade,
    save_cascade,
)
from .hog import HogParams, LinearSvmModel, hog_descriptor, load_svm, save_svm, svm_score
from .integral import integral_image, rect_sum

__all__ = [
    "CascadeDecision",
    "CascadeModel",
    "CascadeStage",
    "Detection",
    "GaussianKernelParams",
    "HaarFeature",
    "HogParams",
    "LinearSvmModel",
    "ModelFormatError",
    "PyramidParams",
    "WeakClassifier",
    "WeightedRect",
    "evaluate_cascade",
    "gaussian_blur",
    "gaussian_kernel",
    "haar_feature_value",
    "hog_descriptor",
    "integral_image",
    "load_cascade",
    "load_svm",
    "non_max_suppression",
    "rect_sum",
    "save_cascade",
    "save_svm",
    "sliding_window_detect",
    "svm_score",
]
