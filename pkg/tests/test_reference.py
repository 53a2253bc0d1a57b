import numpy as np
import pytest

from teleguard.sim import labeled_corpus
from teleguard.threat import ClassScores, ReferenceClassifier, classify, verdict
from teleguard.vision.haar import ModelFormatError


@pytest.fixture(scope="module")
def clf():
    return ReferenceClassifier.load_default()


@pytest.fixture(scope="module")
def samples():
    return labeled_corpus(555, 40)


def test_reference_verdicts_on_sprite_corpus(clf, samples):
    for roi, label in samples:
        scores = classify(roi, clf)
        v = verdict(scores, 0.5)
        if label == 0:
            assert v.threat_probability < 0.5
        else:
            assert v.threat_probability > 0.5


def test_reference_is_deterministic(clf, samples):
    roi = samples[0][0]
    a = np.asarray(clf.predict(roi))
    b = np.asarray(clf.predict(roi))
    assert np.array_equal(a, b)


def test_reference_output_satisfies_score_contract(clf, samples):
    for roi, _ in samples[:10]:
        scores = classify(roi, clf)
        assert isinstance(scores, ClassScores)


def test_reference_model_parse_errors(tmp_path, clf):
    path = tmp_path / "ref.txt"
    path.write_text("refclf v1 10 8\n" + "1 2 3\n" * 9)
    with pytest.raises(ModelFormatError, match="line 2"):
        ReferenceClassifier.load(str(path))
    path.write_text("refclf v2 10 8\n")
    with pytest.raises(ModelFormatError, match="line 1"):
        ReferenceClassifier.load(str(path))
    # row-count mismatch
    ok = "refclf v1 2 8\n" + "\n".join("0.1 0.2" for _ in range(7))
    path.write_text(ok + "\n")
    with pytest.raises(ModelFormatError):
        ReferenceClassifier.load(str(path))


def test_reference_save_load_round_trip(tmp_path, clf, samples):
    path = tmp_path / "ref.txt"
    clf.save(str(path))
    again = ReferenceClassifier.load(str(path))
    roi = samples[1][0]
    a = np.asarray(clf.predict(roi))
    b = np.asarray(again.predict(roi))
    assert np.abs(a - b).max() < 1e-6
