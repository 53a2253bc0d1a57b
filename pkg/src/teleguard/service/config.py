"""Pipeline configuration: defaults, config file, flag overrides."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from ..threat.classify import ClassifierPlugin, StubClassifier
from ..threat.reference import ReferenceClassifier
from ..vision.detect import PyramidParams
from ..vision.gaussian import GaussianKernelParams
from ..vision.haar import CascadeModel, load_cascade
from ..vision.hog import HogParams, LinearSvmModel, load_svm

DETECTOR_HAAR = "haar"
DETECTOR_HOG = "hog"
CLASSIFIER_REFERENCE = "reference"
CLASSIFIER_STUB = "stub"


def packaged_model(name: str) -> str:
    ref = resources.files("teleguard") / "models" / name
    with resources.as_file(ref) as p:
        return str(p)


@dataclass(frozen=True)
class PipelineConfig:
    detector: str = DETECTOR_HAAR
    cascade_path: str | None = None  # None = packaged default
    svm_path: str | None = None
    classifier: str = CLASSIFIER_REFERENCE
    stub_path: str | None = None
    refclf_path: str | None = None
    threshold: float = 0.5
    nms_iou: float = 0.45
    detect_width: int = 633
    detect_height: int = 333
    gaussian: GaussianKernelParams = field(default_factory=GaussianKernelParams)
    pyramid: PyramidParams = field(default_factory=PyramidParams)

    def __post_init__(self) -> None:
        if self.detector not in (DETECTOR_HAAR, DETECTOR_HOG):
            raise ValueError(f"detector must be haar or hog, got {self.detector!r}")
        if self.classifier not in (CLASSIFIER_REFERENCE, CLASSIFIER_STUB):
            raise ValueError(
                f"classifier must be reference or stub, got {self.classifier!r}"
            )
        if not 0.0 < self.threshold < 1.0:
            raise ValueError(f"threshold must be in (0, 1), got {self.threshold}")
        if self.classifier == CLASSIFIER_STUB and not self.stub_path:
            raise ValueError("stub classifier needs a stub_path")


@dataclass(frozen=True)
class LoadedModels:
    """Parsed models; constructing this is the startup gate, so a bad model
    file fails before any frame flows."""

    detector: CascadeModel | tuple[HogParams, LinearSvmModel]
    classifier: ClassifierPlugin


def load_models(config: PipelineConfig) -> LoadedModels:
    if config.detector == DETECTOR_HAAR:
        path = config.cascade_path or packaged_model("person_cascade_v1.txt")
        detector: CascadeModel | tuple = load_cascade(path)
    else:
        path = config.svm_path or packaged_model("person_hog_svm_v1.txt")
        detector = (HogParams(), load_svm(path))
    if config.classifier == CLASSIFIER_REFERENCE:
        if config.refclf_path:
            classifier: ClassifierPlugin = ReferenceClassifier.load(config.refclf_path)
        else:
            classifier = ReferenceClassifier.load_default()
    else:
        classifier = StubClassifier.from_file(config.stub_path)
    return LoadedModels(detector, classifier)


_CONFIG_KEYS = {
    "detector",
    "cascade_path",
    "svm_path",
    "classifier",
    "stub_path",
    "refclf_path",
    "threshold",
    "nms_iou",
    "detect_width",
    "detect_height",
    "blur_sigma",
    "blur_radius",
    "pyramid_scale",
    "pyramid_stride",
}


class ConfigFileError(ValueError):
    pass


def parse_config_file(path: str) -> dict[str, str]:
    """Line-oriented `key = value`; '#' comments and blank lines ignored."""
    values: dict[str, str] = {}
    text = Path(path).read_text(encoding="ascii")
    for i, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigFileError(f"{path}:{i}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigFileError(f"{path}:{i}: unknown key {key!r}")
        values[key] = value
    return values


def apply_options(config: PipelineConfig, options: dict[str, str]) -> PipelineConfig:
    """Apply string-typed options (from a config file or CLI flags)."""
    kwargs: dict = {}
    gaussian = config.gaussian
    pyramid = config.pyramid
    for key, value in options.items():
        if key in ("detector", "classifier", "cascade_path", "svm_path", "stub_path", "refclf_path"):
            kwargs[key] = value
        elif key in ("threshold", "nms_iou"):
            kwargs[key] = float(value)
        elif key in ("detect_width", "detect_height"):
            kwargs[key] = int(value)
        elif key == "blur_sigma":
            s = float(value)
            gaussian = GaussianKernelParams(s, s, 0.0, 0.0, gaussian.radius)
        elif key == "blur_radius":
            gaussian = GaussianKernelParams(
                gaussian.sigma_x, gaussian.sigma_y, gaussian.mu_x, gaussian.mu_y, int(value)
            )
        elif key == "pyramid_scale":
            pyramid = PyramidParams(float(value), pyramid.stride, pyramid.min_window)
        elif key == "pyramid_stride":
            pyramid = PyramidParams(pyramid.scale_factor, int(value), pyramid.min_window)
        else:
            raise ConfigFileError(f"unknown option {key!r}")
    return replace(config, gaussian=gaussian, pyramid=pyramid, **kwargs)
