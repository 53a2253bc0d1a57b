import numpy as np
import pytest

from teleguard.vision import HogParams, LinearSvmModel, hog_descriptor, svm_score
from teleguard.vision.hog import load_svm, save_svm
from teleguard.vision.haar import ModelFormatError

from oracles import scalar_hog


def test_default_descriptor_length_is_3780():
    p = HogParams()
    assert p.descriptor_len == 7 * 15 * 4 * 9 == 3780
    win = np.zeros((128, 64), np.uint8)
    assert hog_descriptor(win, p).shape == (3780,)


def test_uniform_window_gives_zero_descriptor():
    win = np.full((128, 64), 93, np.uint8)
    d = hog_descriptor(win)
    assert (d == 0).all()


def test_window_size_mismatch_rejected():
    with pytest.raises(ValueError):
        hog_descriptor(np.zeros((64, 64), np.uint8), HogParams())


def test_vertical_step_edge_matches_scalar_reference():
    p = HogParams(window_w=16, window_h=16)
    win = np.zeros((16, 16), np.uint8)
    win[:, 8:] = 255
    d = hog_descriptor(win, p)
    ref = np.asarray(scalar_hog(win.tolist(), p.cell, p.bins, p.clip, p.epsilon))
    assert np.abs(d - ref).max() < 1e-9
    # horizontal gradients on a vertical edge: all mass in the 0-degree bin pair
    cells = d.reshape(-1, p.bins)
    energetic = cells[cells.sum(axis=1) > 0]
    assert energetic.size > 0
    assert (energetic.argmax(axis=1) == 0).all()


def test_random_windows_match_scalar_reference():
    rng = np.random.default_rng(21)
    p = HogParams()
    for _ in range(3):
        win = rng.integers(0, 256, size=(128, 64), dtype=np.uint8)
        d = hog_descriptor(win, p)
        ref = np.asarray(scalar_hog(win.tolist(), p.cell, p.bins, p.clip, p.epsilon))
        assert np.abs(d - ref).max() < 1e-9


def test_block_norms_bounded():
    rng = np.random.default_rng(22)
    p = HogParams(window_w=32, window_h=32)
    per_block = 4 * p.bins
    for _ in range(100):
        win = rng.integers(0, 256, size=(32, 32), dtype=np.uint8)
        d = hog_descriptor(win, p)
        norms = np.linalg.norm(d.reshape(-1, per_block), axis=1)
        assert (norms <= 1 + 1e-6).all()


def test_descriptor_deterministic():
    rng = np.random.default_rng(23)
    win = rng.integers(0, 256, size=(128, 64), dtype=np.uint8)
    a = hog_descriptor(win)
    b = hog_descriptor(win.copy())
    assert np.array_equal(a, b)


def test_svm_score_zero_weights_returns_bias():
    m = LinearSvmModel(np.zeros(10), bias=2.5)
    assert svm_score(np.arange(10, dtype=float), m) == 2.5


def test_svm_score_self_dot():
    w = np.linspace(-1, 1, 20)
    m = LinearSvmModel(w, bias=0.0)
    assert svm_score(w, m) == pytest.approx(float(w @ w))


def test_svm_score_matches_naive_accumulation():
    rng = np.random.default_rng(24)
    for _ in range(20):
        w = rng.normal(size=50)
        d = rng.normal(size=50)
        m = LinearSvmModel(w, bias=float(rng.normal()))
        naive = sum(float(a) * float(b) for a, b in zip(w, d)) + m.bias
        assert svm_score(d, m) == pytest.approx(naive, abs=1e-9)


def test_svm_length_mismatch_rejected():
    with pytest.raises(ValueError):
        svm_score(np.zeros(5), LinearSvmModel(np.zeros(6), 0.0))


def test_svm_model_file_round_trip(tmp_path):
    rng = np.random.default_rng(25)
    m = LinearSvmModel(rng.normal(size=37), bias=-0.125, threshold=0.5)
    path = tmp_path / "svm.txt"
    save_svm(m, str(path))
    loaded = load_svm(str(path))
    assert np.allclose(loaded.weights, m.weights, atol=1e-8)
    assert loaded.bias == m.bias and loaded.threshold == m.threshold


def test_svm_parser_line_numbers(tmp_path):
    path = tmp_path / "svm.txt"
    path.write_text("svm v1 3\n1.0 2.0\nbias 0.0\n")
    with pytest.raises(ModelFormatError, match="line 3"):
        load_svm(str(path))
    path.write_text("svm v1 2\n1.0 2.0 3.0\nbias 0.0\n")
    with pytest.raises(ModelFormatError, match="line 2"):
        load_svm(str(path))
    path.write_text("svm v1 2\n1.0 2.0\n")
    with pytest.raises(ModelFormatError, match="bias"):
        load_svm(str(path))
