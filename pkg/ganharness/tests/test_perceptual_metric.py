"""Perceptual metric: identity, symmetry, scale behavior, inception score."""

import numpy as np
import pytest

from ganharness import (
    DependencyError,
    ImageBatch,
    InputSizeError,
    PerceptualMetric,
    ValidationError,
    inception_score,
)


@pytest.fixture(scope="module")
def metric():
    return PerceptualMetric()


def noise_images(n, seed=0):
    rng = np.random.default_rng(seed)
    return rng.integers(0, 256, (n, 64, 64, 3), dtype=np.uint8)


def test_identical_images_score_exactly_zero(metric):
    images = noise_images(4, seed=1)
    feats = metric.featurize(images)
    direct = metric.pair_scores(feats, [0, 1, 2, 3], [0, 1, 2, 3])
    assert np.array_equal(direct, np.zeros(4))
    cross = metric.cross_scores(feats, [0, 1], [0, 1])
    assert float(cross[0, 0]) == 0.0
    assert float(cross[1, 1]) == 0.0


def test_cross_scores_match_pair_scores(metric):
    images = noise_images(6, seed=2)
    feats = metric.featurize(images)
    cross = metric.cross_scores(feats, [0, 1, 2], [3, 4, 5])
    for i, a in enumerate([0, 1, 2]):
        for j, b in enumerate([3, 4, 5]):
            direct = metric.pair_scores(feats, [a], [b])[0]
            assert abs(cross[i, j] - direct) < 1e-5


def test_distance_is_symmetric_and_nonnegative(metric):
    images = noise_images(5, seed=3)
    feats = metric.featurize(images)
    ab = metric.cross_scores(feats, [0, 1], [2, 3])
    ba = metric.cross_scores(feats, [2, 3], [0, 1])
    assert np.allclose(ab, ba.T, atol=1e-6)
    assert np.all(ab >= 0.0)


def test_featurize_is_batch_invariant(metric):
    images = noise_images(10, seed=4)
    a = metric.featurize(images, batch_size=3)
    b = metric.featurize(images, batch_size=128)
    for fa, fb in zip(a, b):
        assert np.allclose(fa, fb, atol=1e-6)


def test_unrelated_noise_pairs_score_far_above_threshold(metric):
    """Independent noise pairs sit far above the near-duplicate band."""
    images = noise_images(128, seed=5)
    feats = metric.featurize(images)
    d = metric.pair_scores(feats, np.arange(0, 128, 2), np.arange(1, 128, 2))
    assert float(d.min()) > 10.0
    assert 30.0 < float(d.mean()) < 60.0


def test_missing_weight_file_is_a_dependency_error(tmp_path):
    with pytest.raises(DependencyError):
        PerceptualMetric(weights=str(tmp_path / "absent.npz"))


def test_inception_score_needs_enough_images(metric):
    batch = ImageBatch(
        images=noise_images(20, seed=6),
        labels=(np.arange(20) % 10 + 1).astype(np.uint8),
    )
    with pytest.raises(InputSizeError, match="1000"):
        inception_score(batch, metric=metric)
    with pytest.raises(ValidationError):
        inception_score(batch, metric=metric, splits=0, min_images=20)


def test_single_image_repeated_gives_inception_score_one(metric):
    one = noise_images(1, seed=7)
    batch = ImageBatch(
        images=np.repeat(one, 1000, axis=0),
        labels=np.full(1000, 3, dtype=np.uint8),
    )
    mean, std = inception_score(batch, metric=metric)
    assert mean == 1.0
    assert std == 0.0


def test_diverse_images_score_above_one(metric):
    batch = ImageBatch(
        images=noise_images(1000, seed=8),
        labels=(np.arange(1000) % 10 + 1).astype(np.uint8),
    )
    mean, std = inception_score(batch, metric=metric)
    assert mean > 1.0
    assert std >= 0.0
