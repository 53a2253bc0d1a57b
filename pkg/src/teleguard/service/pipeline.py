"""Per-frame processing: blur, detect, classify, annotate, format."""

from __future__ import annotations

from ..image import as_rgb, box_downscale, luma_bt601
from ..overlay.draw import FRAME_H, FRAME_W, AnnotatedFrame, draw_annotations
from ..overlay.sbs import SbsFrame, to_half_sbs
from ..threat.classify import (
    LABELS,
    ClassifierUnavailableError,
    ThreatVerdict,
    classify,
    verdict,
)
from ..threat.roi import extract_and_resize
from ..transport.messages import DetectionRecord, Detections
from ..vision.detect import Detection, non_max_suppression, sliding_window_detect
from ..vision.gaussian import gaussian_blur
from .config import LoadedModels, PipelineConfig
from .metrics import StageMetrics

UNKNOWN_LABEL_INDEX = 255


def _scale_detection(d: Detection, sx: float, sy: float, fw: int, fh: int) -> Detection:
    x = min(int(d.x * sx + 0.5), fw - 1)
    y = min(int(d.y * sy + 0.5), fh - 1)
    w = max(1, min(int(d.w * sx + 0.5), fw - x))
    h = max(1, min(int(d.h * sy + 0.5), fh - y))
    return Detection(x, y, w, h, d.person_score, d.scale * sx)


def process_frame(
    frame,
    models: LoadedModels,
    config: PipelineConfig,
    metrics: StageMetrics | None = None,
    frame_seq: int = 0,
    timestamp_us: int = 0,
) -> tuple[AnnotatedFrame, SbsFrame, Detections]:
    """Deterministic composition of the pipeline stages for one frame.

    Classifier failures degrade the affected detection to an UNKNOWN
    verdict; the frame is still annotated and delivered.
    """
    rgb = as_rgb(frame)
    fh, fw = rgb.shape[:2]
    if (fw, fh) != (FRAME_W, FRAME_H):
        raise ValueError(f"pipeline expects {FRAME_W}x{FRAME_H} frames, got {fw}x{fh}")
    m = metrics or StageMetrics()

    with m.stage("ingest"):
        gray = luma_bt601(rgb)
    with m.stage("downscale"):
        small = box_downscale(gray, config.detect_width, config.detect_height)
    with m.stage("blur"):
        blurred = gaussian_blur(small, config.gaussian)
    with m.stage("detect"):
        raw = sliding_window_detect(blurred, models.detector, config.pyramid)
        kept = non_max_suppression(raw, config.nms_iou)
    sx = fw / config.detect_width
    sy = fh / config.detect_height
    scaled = [_scale_detection(d, sx, sy, fw, fh) for d in kept]

    items: list[tuple[Detection, ThreatVerdict | None]] = []
    records = []
    with m.stage("classify"):
        for det in scaled:
            roi = extract_and_resize(gray, det.bbox)
            m.bump("classifier_calls")
            try:
                scores = classify(roi, models.classifier)
                vd = verdict(scores, config.threshold)
            except ClassifierUnavailableError:
                m.bump("classifier_failures")
                vd = None
            items.append((det, vd))
            if vd is None:
                records.append(
                    DetectionRecord(
                        det.x, det.y, det.w, det.h, det.person_score,
                        0.0, 0, "UNKNOWN", UNKNOWN_LABEL_INDEX,
                    )
                )
            else:
                records.append(
                    DetectionRecord(
                        det.x, det.y, det.w, det.h, det.person_score,
                        vd.threat_probability, vd.percent, vd.color,
                        LABELS.index(vd.label),
                    )
                )

    with m.stage("annotate"):
        annotated = draw_annotations(rgb, items, frame_seq, timestamp_us)
    with m.stage("sbs"):
        sbs = to_half_sbs(annotated)
    m.bump("detections_total", len(records))
    m.bump("frames_out")
    return annotated, sbs, Detections(frame_seq, tuple(records))
