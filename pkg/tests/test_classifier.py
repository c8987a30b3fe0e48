import cv2
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gestureswarm.classifier import (
    CentroidClassifier,
    default_classifier,
    descriptor,
    hu_moments,
)
from gestureswarm.core import DimensionError, Gesture
from gestureswarm.images import BinaryImage
from gestureswarm.silhouettes import SHAPE_GESTURES, draw_silhouette, sample_set


@pytest.fixture(scope="module")
def training_set():
    return sample_set()


@pytest.fixture(scope="module")
def clf(training_set):
    return CentroidClassifier.fit(training_set)


def shift_image(img: BinaryImage, dy: int, dx: int) -> BinaryImage:
    assert np.array_equal(np.roll(img.bits, (dy, dx), axis=(0, 1)).sum(), img.bits.sum())
    return BinaryImage(np.roll(img.bits, (dy, dx), axis=(0, 1)))


class TestHuMoments:
    def test_matches_independent_implementation(self, training_set):
        # opencv computes the same seven invariants by a separate path
        for gesture, img in training_set[::7]:
            mine = hu_moments(img)
            ref = cv2.HuMoments(cv2.moments(img.bits, binaryImage=True)).ravel()
            assert np.allclose(mine, ref, rtol=1e-6, atol=1e-12)

    def test_empty_foreground_rejected(self):
        with pytest.raises(ValueError):
            hu_moments(BinaryImage(np.zeros((240, 240), dtype=np.uint8)))

    def test_translation_leaves_invariants_bit_identical(self, training_set):
        _, img = training_set[0]
        shifted = shift_image(img, 17, -9)
        assert np.array_equal(hu_moments(img), hu_moments(shifted))

    def test_scale_invariance_up_to_rasterization(self):
        small = draw_silhouette(Gesture.FIST, 40.0, (119.5, 119.5))
        big = draw_silhouette(Gesture.FIST, 80.0, (119.5, 119.5))
        assert np.allclose(hu_moments(small), hu_moments(big), rtol=0.05, atol=1e-6)


class TestClassifier:
    def test_all_zero_image_is_none_with_full_confidence(self, clf):
        out = clf.classify(BinaryImage(np.zeros((240, 240), dtype=np.uint8)))
        assert out == (Gesture.NONE, 1.0)

    def test_wrong_dimensions_rejected(self, clf):
        with pytest.raises(DimensionError):
            clf.classify(BinaryImage(np.zeros((120, 120), dtype=np.uint8)))

    def test_every_training_silhouette_recovers_its_label(self, clf, training_set):
        for gesture, img in training_set:
            label, confidence = clf.classify(img)
            assert label is gesture
            assert 0.0 <= confidence <= 1.0

    def test_translated_copy_keeps_label_and_confidence(self, clf, training_set):
        gesture, img = training_set[3]
        base_label, base_conf = clf.classify(img)
        label, conf = clf.classify(shift_image(img, 10, 10))
        assert label is base_label
        assert abs(conf - base_conf) < 1e-9

    @given(
        dy=st.integers(min_value=-20, max_value=20),
        dx=st.integers(min_value=-20, max_value=20),
        index=st.integers(min_value=0, max_value=119),
    )
    @settings(max_examples=40, deadline=None)
    def test_translation_invariance_property(self, dy, dx, index):
        clf = default_classifier()
        gesture, img = _default_set()[index]
        label, conf = clf.classify(shift_image(img, dy, dx))
        base_label, base_conf = clf.classify(img)
        assert label is base_label
        assert abs(conf - base_conf) < 1e-9

    def test_confidence_softmin_in_unit_interval(self, clf, training_set):
        for _, img in training_set[::11]:
            _, conf = clf.classify(img)
            assert 0.0 < conf <= 1.0

    def test_model_roundtrip(self, clf, training_set, tmp_path):
        path = tmp_path / "model.json"
        clf.save(path)
        loaded = CentroidClassifier.load(path)
        assert set(loaded.centroids) == set(clf.centroids)
        for gesture, img in training_set[::13]:
            assert loaded.classify(img) == clf.classify(img)


_cached = None


def _default_set():
    global _cached
    if _cached is None:
        _cached = sample_set()
    return _cached


def test_descriptor_is_finite_and_seven_dimensional(training_set):
    for _, img in training_set[::9]:
        vec = descriptor(img)
        assert vec.shape == (7,)
        assert np.all(np.isfinite(vec))


def test_default_classifier_covers_all_shape_gestures():
    assert set(default_classifier().centroids) == set(SHAPE_GESTURES)
