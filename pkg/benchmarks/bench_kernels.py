#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback, plus the
HAAR-vs-HOG detector comparison at pipeline settings.

  python benchmarks/bench_kernels.py [--repeats 20]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from teleguard.kernels import _pykern

try:
    from teleguard.kernels import _nkern
except ImportError:
    _nkern = None

from teleguard.service.config import packaged_model
from teleguard.vision import (
    HogParams,
    PyramidParams,
    GaussianKernelParams,
    gaussian_blur,
    integral_image,
    load_cascade,
    load_svm,
    sliding_window_detect,
)
from teleguard.vision.gaussian import _axis_kernel
from teleguard.vision.haar import flatten_cascade


def timeit(fn, repeats):
    fn()  # warm
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats * 1000.0


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=20)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    rgb = rng.integers(0, 256, size=(1000, 1900, 3), dtype=np.uint8)
    gray = rng.integers(0, 256, size=(333, 633), dtype=np.uint8)
    gray[100:260, 250:320] = 50
    win = rng.integers(0, 256, size=(128, 64), dtype=np.uint8)
    k = _axis_kernel(2, 1.0, 0.0)
    k = k / k.sum()
    ii = integral_image(gray)
    cascade = load_cascade(packaged_model("person_cascade_v1.txt"))
    arrays = flatten_cascade(cascade)
    sweep_args = (
        ii, cascade.window_w, cascade.window_h, 8,
        arrays.stage_thr, arrays.stage_start, arrays.weak_split,
        arrays.weak_left, arrays.weak_right, arrays.rect_start,
        arrays.rect_x, arrays.rect_y, arrays.rect_w, arrays.rect_h, arrays.rect_wt,
    )

    full_gray = _pykern.luma_bt601(rgb)
    cases = {
        "luma_bt601 1900x1000": lambda b: b.luma_bt601(rgb),
        "box_downscale 1900x1000 -> 633x333": lambda b: b.box_downscale_u8(
            full_gray, 333, 633
        ),
        "blur_u8 633x333 r2": lambda b: b.blur_u8(gray, k, k),
        "cascade_sweep 633x333": lambda b: b.cascade_sweep(*sweep_args),
        "hog_descriptor 64x128": lambda b: b.hog_descriptor_f64(win, 8, 9, 0.2, 1e-5),
        "sbs_half_rgb 1900x1000": lambda b: b.sbs_half_rgb(rgb),
    }

    print(f"{'kernel':38s} {'python ms':>10s} {'compiled ms':>12s} {'speedup':>8s}")
    for name, call in cases.items():
        py_ms = timeit(lambda: call(_pykern), args.repeats)
        if _nkern is not None:
            c_ms = timeit(lambda: call(_nkern), args.repeats)
            print(f"{name:38s} {py_ms:10.2f} {c_ms:12.2f} {py_ms / c_ms:7.1f}x")
        else:
            print(f"{name:38s} {py_ms:10.2f} {'n/a':>12s} {'':>8s}")

    # detector comparison at identical settings (1/3-scale frame, default pyramid)
    blurred = gaussian_blur(gray, GaussianKernelParams())
    svm = load_svm(packaged_model("person_hog_svm_v1.txt"))
    pyramid = PyramidParams()
    haar_ms = timeit(lambda: sliding_window_detect(blurred, cascade, pyramid), 10)
    t0 = time.perf_counter()
    sliding_window_detect(blurred, (HogParams(), svm), pyramid)
    hog_ms = (time.perf_counter() - t0) * 1000.0
    print(
        f"\ndetector at 633x333: HAAR {1000 / haar_ms:.1f} fps, "
        f"HOG+SVM {1000 / hog_ms:.2f} fps, ratio {hog_ms / haar_ms:.1f}x"
    )


if __name__ == "__main__":
    main()
