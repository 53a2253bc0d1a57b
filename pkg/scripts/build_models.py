#!/usr/bin/env python3
"""Build the committed detector and classifier model files.

Deterministic end to end: rerunning reproduces byte-identical models.

  python scripts/build_models.py [--out src/teleguard/models]

Produces:
  person_cascade_v1.txt        hand-built stage features, thresholds
                               calibrated on rendered window statistics
  person_hog_svm_v1.txt        logistic fit on HOG window descriptors
  reference_classifier_v1.txt  8-way softmax regression on the ROI corpus
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from teleguard.sim import detector_window_dataset, labeled_corpus
from teleguard.sim.corpus import augmented_corpus
from teleguard.threat.classify import N_CLASSES
from teleguard.threat.reference import ReferenceClassifier, roi_features
from teleguard.vision import (
    CascadeModel,
    CascadeStage,
    HaarFeature,
    HogParams,
    LinearSvmModel,
    WeakClassifier,
    WeightedRect,
    hog_descriptor,
    integral_image,
    save_cascade,
    save_svm,
)
from teleguard.vision.haar import haar_feature_value

CASCADE_SEED = 1001
SVM_SEED = 1002
REFCLF_TRAIN_SEED = 1003
REFCLF_HELDOUT_SEED = 2003

WIN_W, WIN_H = 32, 64
HOG_PARAMS = HogParams()


def cascade_features() -> list[HaarFeature]:
    """Window-relative contrast probes for the dark person silhouette.

    Weighted areas balance to zero on flat background, so values measure
    sprite-vs-background contrast, not absolute brightness.
    """
    flanks_vs_torso = HaarFeature(
        rects=(
            WeightedRect(0, 16, 8, 24, 1.0),
            WeightedRect(24, 16, 8, 24, 1.0),
            WeightedRect(8, 16, 16, 24, -1.0),
        ),
        window_w=WIN_W,
        window_h=WIN_H,
    )
    corners_vs_head = HaarFeature(
        rects=(
            WeightedRect(0, 6, 10, 12, 1.0),
            WeightedRect(22, 6, 10, 12, 1.0),
            WeightedRect(10, 6, 12, 12, -240.0 / 144.0),
        ),
        window_w=WIN_W,
        window_h=WIN_H,
    )
    above_vs_torso = HaarFeature(
        rects=(
            WeightedRect(8, 0, 16, 6, 3.0),
            WeightedRect(8, 18, 16, 18, -1.0),
        ),
        window_w=WIN_W,
        window_h=WIN_H,
    )
    below_vs_legs = HaarFeature(
        rects=(
            WeightedRect(8, 60, 16, 4, 3.5),
            WeightedRect(8, 42, 16, 14, -1.0),
        ),
        window_w=WIN_W,
        window_h=WIN_H,
    )
    return [flanks_vs_torso, corners_vs_head, above_vs_torso, below_vs_legs]


def build_cascade(out: Path) -> CascadeModel:
    t0 = time.perf_counter()
    pos, neg = detector_window_dataset(CASCADE_SEED, 600, 1800, WIN_W, WIN_H)
    feats = cascade_features()
    pos_vals = np.array(
        [[haar_feature_value(integral_image(w), f, (0, 0)) for f in feats] for w in pos]
    )
    neg_vals = np.array(
        [[haar_feature_value(integral_image(w), f, (0, 0)) for f in feats] for w in neg]
    )
    splits = []
    for i, f in enumerate(feats):
        lo = np.percentile(pos_vals[:, i], 0.5)
        hi = np.percentile(neg_vals[:, i], 99.5)
        split = 0.5 * (lo + hi)
        sep = lo - hi
        print(
            f"  feature {i}: pos_p0.5={lo:10.0f} neg_p99.5={hi:10.0f} "
            f"split={split:10.0f} separation={'ok' if sep > 0 else 'WEAK'}"
        )
        splits.append(split)

    def weak(i: int) -> WeakClassifier:
        return WeakClassifier(feats[i], splits[i], -1.0, 1.0)

    model = CascadeModel(
        WIN_W,
        WIN_H,
        (
            CascadeStage(0.5, (weak(0),)),
            CascadeStage(1.5, (weak(1), weak(3))),
            CascadeStage(1.5, (weak(2), weak(0))),
        ),
    )

    from teleguard.vision import evaluate_cascade

    pos_pass = sum(
        evaluate_cascade(integral_image(w), model, (0, 0)).accepted for w in pos
    )
    neg_pass = sum(
        evaluate_cascade(integral_image(w), model, (0, 0)).accepted for w in neg
    )
    print(
        f"  cascade: {pos_pass}/{len(pos)} positives accepted, "
        f"{neg_pass}/{len(neg)} negatives accepted "
        f"({time.perf_counter() - t0:.1f}s)"
    )
    save_cascade(model, str(out / "person_cascade_v1.txt"))
    return model


def build_svm(out: Path) -> LinearSvmModel:
    t0 = time.perf_counter()
    pos, neg = detector_window_dataset(
        SVM_SEED, 500, 1500, HOG_PARAMS.window_w, HOG_PARAMS.window_h
    )
    x = np.array([hog_descriptor(w, HOG_PARAMS) for w in pos + neg], dtype=np.float64)
    y = np.array([1.0] * len(pos) + [0.0] * len(neg))
    w = np.zeros(x.shape[1])
    b = 0.0
    lr = 0.5
    for epoch in range(400):
        z = x @ w + b
        p = 1.0 / (1.0 + np.exp(-z))
        grad_w = x.T @ (p - y) / len(y) + 1e-4 * w
        grad_b = float(np.mean(p - y))
        w -= lr * grad_w
        b -= lr * grad_b
    pred = (x @ w + b) > 0
    acc = float(np.mean(pred == (y > 0.5)))
    print(f"  hog svm: train accuracy {acc:.4f} ({time.perf_counter() - t0:.1f}s)")
    model = LinearSvmModel(w, b, threshold=0.0)
    save_svm(model, str(out / "person_hog_svm_v1.txt"))
    return model


def build_refclf(out: Path) -> None:
    t0 = time.perf_counter()
    train = labeled_corpus(REFCLF_TRAIN_SEED, 5000)
    train += augmented_corpus(REFCLF_TRAIN_SEED + 1, 5000, unarmed_frac=0.45)
    x = np.array([roi_features(roi.pixels) for roi, _ in train], dtype=np.float64)
    y = np.array([label for _, label in train])
    print(f"  refclf: corpus + features in {time.perf_counter() - t0:.1f}s")
    onehot = np.eye(N_CLASSES)[y]
    w = np.zeros((N_CLASSES, x.shape[1]))
    b = np.zeros(N_CLASSES)
    lr = 2.0
    t0 = time.perf_counter()
    for epoch in range(300):
        z = x @ w.T + b
        z -= z.max(axis=1, keepdims=True)
        e = np.exp(z)
        p = e / e.sum(axis=1, keepdims=True)
        g = (p - onehot) / len(y)
        w -= lr * (g.T @ x + 1e-5 * w)
        b -= lr * g.sum(axis=0)
    train_acc = float(np.mean((x @ w.T + b).argmax(axis=1) == y))
    clf = ReferenceClassifier(w, b)
    held = labeled_corpus(REFCLF_HELDOUT_SEED, 1000)
    hx = np.array([roi_features(roi.pixels) for roi, _ in held])
    hy = np.array([label for _, label in held])
    held_acc = float(np.mean((hx @ w.T + b).argmax(axis=1) == hy))
    aug = augmented_corpus(REFCLF_HELDOUT_SEED + 1, 500)
    ax = np.array([roi_features(roi.pixels) for roi, _ in aug])
    ay = np.array([label for _, label in aug])
    az = ax @ w.T + b
    aug_acc = float(np.mean(az.argmax(axis=1) == ay))
    ae = np.exp(az - az.max(axis=1, keepdims=True))
    ap = ae / ae.sum(axis=1, keepdims=True)
    aug_threat = float(np.mean(((1.0 - ap[:, 0]) >= 0.5) == (ay > 0)))
    print(
        f"  refclf: train accuracy {train_acc:.4f}, held-out {held_acc:.4f}, "
        f"augmented {aug_acc:.4f} (armed-vs-unarmed {aug_threat:.4f}) "
        f"({time.perf_counter() - t0:.1f}s fit)"
    )
    clf.save(str(out / "reference_classifier_v1.txt"))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument(
        "--out",
        default=str(Path(__file__).resolve().parent.parent / "src/teleguard/models"),
    )
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    print("building cascade...")
    build_cascade(out)
    print("building hog svm...")
    build_svm(out)
    print("building reference classifier...")
    build_refclf(out)
    print(f"models written to {out}")


if __name__ == "__main__":
    main()
