import numpy as np
import pytest

from teleguard.threat import (
    GREEN,
    LABELS,
    RED,
    ClassifierUnavailableError,
    ClassScores,
    FailingClassifier,
    RoiImage,
    StubClassifier,
    classify,
    extract_and_resize,
    softmax,
    verdict,
)

from oracles import bilinear_resize


def frame_with_region(w=500, h=500, fill=0):
    return np.full((h, w), fill, np.uint8)


def test_extract_identity_crop_is_byte_identical():
    rng = np.random.default_rng(40)
    frame = rng.integers(0, 256, size=(400, 400), dtype=np.uint8)
    roi = extract_and_resize(frame, (50, 60, 227, 227))
    assert np.array_equal(roi.pixels, frame[60 : 60 + 227, 50 : 50 + 227])
    assert roi.source_bbox == (50, 60, 227, 227)


def test_extract_uniform_region_stays_uniform():
    frame = frame_with_region(fill=99)
    roi = extract_and_resize(frame, (10, 20, 454, 454))
    assert (roi.pixels == 99).all()


def test_extract_gradient_matches_bilinear_oracle():
    x = np.arange(300, dtype=np.uint8)
    frame = np.tile(x, (320, 1))
    roi = extract_and_resize(frame, (100, 10, 100, 300))
    crop = frame[10:310, 100:200]
    ref = np.asarray(bilinear_resize(crop.tolist(), 227, 227))
    assert np.abs(roi.pixels.astype(int) - ref).max() <= 1


def test_extract_out_of_bounds_rejected():
    frame = frame_with_region()
    with pytest.raises(ValueError):
        extract_and_resize(frame, (400, 400, 200, 200))
    with pytest.raises(ValueError):
        extract_and_resize(frame, (-1, 0, 100, 100))
    with pytest.raises(ValueError):
        extract_and_resize(frame, (0, 0, 0, 10))


def test_roi_shape_enforced():
    with pytest.raises(ValueError):
        RoiImage(np.zeros((100, 227), np.uint8), (0, 0, 1, 1))


def test_softmax_equal_logits_uniform():
    s = softmax([3.0] * 8)
    assert np.allclose(s.probabilities, 0.125, atol=1e-15)
    assert abs(s.probabilities.sum() - 1.0) < 1e-12


def test_softmax_dominant_logit():
    logits = [0.0] * 8
    logits[5] = 50.0
    s = softmax(logits)
    assert s.probabilities[5] > 0.999
    assert s.argmax_label == LABELS[5]


def test_softmax_shift_invariance():
    rng = np.random.default_rng(41)
    l = rng.normal(size=8)
    a = softmax(l).probabilities
    b = softmax(l + 123.456).probabilities
    assert np.abs(a - b).max() < 1e-12


def test_softmax_rejects_non_finite():
    bad = [0.0] * 8
    bad[2] = float("nan")
    with pytest.raises(ValueError):
        softmax(bad)
    bad[2] = float("inf")
    with pytest.raises(ValueError):
        softmax(bad)


def roi_of_zeros():
    return RoiImage(np.zeros((227, 227), np.uint8), (0, 0, 227, 227))


def test_classify_stub_passthrough():
    probs = [0.5, 0.1, 0.1, 0.1, 0.1, 0.05, 0.03, 0.02]
    scores = classify(roi_of_zeros(), StubClassifier(probs))
    assert np.allclose(scores.probabilities, probs)


def test_classify_rejects_invariant_violations():
    with pytest.raises(ClassifierUnavailableError):
        classify(roi_of_zeros(), StubClassifier([0.5] * 8))  # sums to 4
    with pytest.raises(ClassifierUnavailableError):
        classify(roi_of_zeros(), StubClassifier([1.5, -0.5] + [0.0] * 6))
    with pytest.raises(ClassifierUnavailableError):
        classify(roi_of_zeros(), StubClassifier([1.0] * 1))


def test_classify_plugin_failure_is_typed():
    with pytest.raises(ClassifierUnavailableError):
        classify(roi_of_zeros(), FailingClassifier())


def test_class_scores_validation():
    with pytest.raises(ValueError):
        ClassScores(np.array([0.5, 0.5]))
    p = np.full(8, 0.125)
    p[0] += 1e-6
    with pytest.raises(ValueError):
        ClassScores(p)


def test_verdict_no_weapon_certain():
    p = np.zeros(8)
    p[0] = 1.0
    v = verdict(ClassScores(p), 0.5)
    assert v.threat_probability == 0.0
    assert v.percent == 0
    assert v.color == GREEN


def test_verdict_weapon_certain():
    p = np.zeros(8)
    p[3] = 1.0
    v = verdict(ClassScores(p), 0.5)
    assert v.threat_probability == 1.0
    assert v.percent == 100
    assert v.color == RED
    assert v.label == "pistol"


def test_verdict_rounding_independent_of_color():
    p = np.zeros(8)
    p[0] = 0.505
    p[1] = 0.495
    v = verdict(ClassScores(p), 0.5)
    assert v.color == GREEN
    assert v.percent == 50  # 49.5 rounds half up


def test_verdict_threshold_boundary_is_red():
    p = np.zeros(8)
    p[0] = 0.5
    p[4] = 0.5
    assert verdict(ClassScores(p), 0.5).color == RED
