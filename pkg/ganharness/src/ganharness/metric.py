"""Pinned perceptual distance, classifier head, and inception-style score.

The published learned-network similarity metrics are heavyweight pinned
artifacts; this harness substitutes a fixed three-layer random-convolution
feature stack whose weights are derived from a frozen seed, normalized the
same way (unit channel vectors per spatial position, squared differences
averaged over space and layers). Raw distances are multiplied by a frozen
gain calibrated once against the v1 desk-scale generator checkpoint so
that the default 0.3 threshold separates near-duplicates from ordinary
same-class variation: collapsed (near-duplicate) outputs score below 0.3,
fully distinct generated images score well above 1, and independent
uniform-noise pairs land around 40. Identical images score exactly 0.

The inception-style score reuses the deepest features: a frozen logistic
head over spatially pooled activations gives per-image class
probabilities (fitted once on the procedural dataset by
tools/fit_metric_head.py and shipped as data/metric_head_v1.npy), and the
standard exp(mean KL(p(y|x) || p(y))) is evaluated over seeded-shuffle
splits. Shuffling before splitting keeps the score independent of input
ordering, so class-sorted and class-cycling batches score alike.
"""

from __future__ import annotations

import importlib.resources

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import DependencyError, InputSizeError, ValidationError
from .gimg import ImageBatch

METRIC_SEED = 772941
LAYER_CHANNELS = (12, 24, 48)
KERNEL = 5
LEAK = 0.2
N_CLASSES = 10
_HEAD_RESOURCE = "metric_head_v1.npy"

# Frozen distance gain, calibrated once against the v1 generator checkpoint
# and never recomputed: it places the near-duplicate band of desk-scale
# generated images below the 0.3 default threshold while ordinary same-class
# variation stays above it. Changing this constant changes every reported
# score, so it is versioned with the metric.
SCORE_SCALE = 600.0

DEFAULT_THRESHOLD = 0.3
MIN_IS_IMAGES = 1000

# Mean per-image KL below this is floating-point residue from averaging
# identical probability rows; snapping it to zero keeps the zero-diversity
# lower bound (a single repeated image) at exactly 1.0.
_KL_FLOOR = 1e-12

# Raw squared-distance magnitudes below this are Gram-product rounding noise
# (observed residue ~1e-14; real pair distances start ~1e-4 before scaling).
_GRAM_FLOOR = 1e-9


def _conv5x5_s2(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Stride-2 pad-2 5x5 convolution, NCHW in, NCHW out."""
    xp = np.pad(x, ((0, 0), (0, 0), (2, 2), (2, 2)))
    win = sliding_window_view(xp, (KERNEL, KERNEL), axis=(2, 3))[:, :, ::2, ::2]
    out = np.tensordot(win, w, axes=([1, 4, 5], [1, 2, 3]))
    return out.transpose(0, 3, 1, 2)


def _lrelu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, np.float32(LEAK) * x)


def _unit_channels(feat: np.ndarray) -> np.ndarray:
    norm = np.sqrt(np.sum(feat * feat, axis=1, keepdims=True)) + np.float32(1e-10)
    return feat / norm


class PerceptualMetric:
    """Frozen feature stack shared by the distance, classifier, and t-SNE."""

    def __init__(self, weights: str = "builtin"):
        if weights == "builtin":
            arrays = self._builtin_conv_weights()
            arrays["head"] = self._builtin_head()
        else:
            try:
                with np.load(weights) as bundle:
                    arrays = {k: bundle[k].astype(np.float32) for k in bundle.files}
            except OSError as exc:
                raise DependencyError(
                    f"perceptual weights not available at {weights!r}: {exc}"
                ) from exc
        self.convs = []
        c_in = 3
        for i, c_out in enumerate(LAYER_CHANNELS):
            name = f"conv{i + 1}"
            if name not in arrays or arrays[name].shape != (c_out, c_in, KERNEL, KERNEL):
                raise ValidationError(f"weights missing or misshaped tensor {name!r}")
            self.convs.append(arrays[name])
            c_in = c_out
        if "head" not in arrays or arrays["head"].shape != (
            N_CLASSES,
            LAYER_CHANNELS[-1] + 1,
        ):
            raise ValidationError("weights missing or misshaped tensor 'head'")
        self.head = arrays["head"]

    @staticmethod
    def _builtin_conv_weights() -> dict:
        rng = np.random.default_rng(METRIC_SEED)
        arrays = {}
        c_in = 3
        for i, c_out in enumerate(LAYER_CHANNELS):
            std = np.sqrt(2.0 / (c_in * KERNEL * KERNEL))
            arrays[f"conv{i + 1}"] = rng.normal(
                0.0, std, (c_out, c_in, KERNEL, KERNEL)
            ).astype(np.float32)
            c_in = c_out
        return arrays

    @staticmethod
    def _builtin_head() -> np.ndarray:
        """Packaged classifier head, class weights with bias as last column."""
        resource = importlib.resources.files("ganharness").joinpath(
            "data", _HEAD_RESOURCE
        )
        try:
            with importlib.resources.as_file(resource) as path:
                return np.load(path).astype(np.float32)
        except (FileNotFoundError, OSError) as exc:
            raise DependencyError(
                f"classifier head {_HEAD_RESOURCE!r} is not packaged: {exc}"
            ) from exc

    def _stack(self, images: np.ndarray) -> list:
        """Raw activations per layer for uint8 NHWC input."""
        x = images.astype(np.float32).transpose(0, 3, 1, 2) / np.float32(127.5)
        x -= np.float32(1.0)
        feats = []
        for i, w in enumerate(self.convs):
            x = _conv5x5_s2(x, w)
            if i < len(self.convs) - 1:
                x = _lrelu(x)
            feats.append(x)
        return feats

    def featurize(self, images: np.ndarray, batch_size: int = 128) -> list:
        """Normalized flat feature rows per layer, for distance evaluation."""
        if images.ndim != 4:
            raise ValidationError(f"expected NHWC uint8 images, got {images.shape}")
        per_layer = [[] for _ in LAYER_CHANNELS]
        for start in range(0, images.shape[0], batch_size):
            feats = self._stack(images[start : start + batch_size])
            for i, f in enumerate(feats):
                per_layer[i].append(_unit_channels(f).reshape(f.shape[0], -1))
        return [
            np.concatenate(chunks, axis=0)
            if chunks
            else np.zeros((0, 0), dtype=np.float32)
            for chunks in per_layer
        ]

    def pair_scores(self, feats: list, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """Distance for each (left[k], right[k]) feature-row index pair."""
        left = np.asarray(left, dtype=np.int64)
        right = np.asarray(right, dtype=np.int64)
        total = np.zeros(left.shape[0], dtype=np.float64)
        for layer in feats:
            diff = layer[left].astype(np.float64) - layer[right].astype(np.float64)
            total += np.mean(diff * diff, axis=1)
        return total * (SCORE_SCALE / len(feats))

    def cross_scores(self, feats: list, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """Full distance matrix between two index sets, via Gram products."""
        left = np.asarray(left, dtype=np.int64)
        right = np.asarray(right, dtype=np.int64)
        total = np.zeros((left.shape[0], right.shape[0]), dtype=np.float64)
        for layer in feats:
            a = layer[left].astype(np.float64)
            b = layer[right].astype(np.float64)
            dims = layer.shape[1]
            sq_a = np.mean(a * a, axis=1)
            sq_b = np.mean(b * b, axis=1)
            total += sq_a[:, None] + sq_b[None, :] - 2.0 * (a @ b.T) / dims
        # Gram-product rounding leaves identical rows a few ulps off zero,
        # either side; snap that band to an exact 0 so both scoring routes
        # agree that identical images are distance zero.
        total[np.abs(total) < _GRAM_FLOOR] = 0.0
        return np.maximum(total, 0.0) * (SCORE_SCALE / len(feats))

    def embed_features(self, images: np.ndarray, batch_size: int = 128) -> np.ndarray:
        """Spatially pooled deepest-layer activations, (n, 48)."""
        rows = []
        for start in range(0, images.shape[0], batch_size):
            feats = self._stack(images[start : start + batch_size])
            rows.append(np.mean(feats[-1], axis=(2, 3)))
        return (
            np.concatenate(rows, axis=0)
            if rows
            else np.zeros((0, LAYER_CHANNELS[-1]), dtype=np.float32)
        )

    def class_probabilities(self, images: np.ndarray, batch_size: int = 128) -> np.ndarray:
        pooled = self.embed_features(images, batch_size=batch_size).astype(np.float64)
        weights = self.head[:, :-1].astype(np.float64)
        bias = self.head[:, -1].astype(np.float64)
        logits = pooled @ weights.T + bias
        logits = logits - logits.max(axis=1, keepdims=True)
        p = np.exp(logits)
        return p / p.sum(axis=1, keepdims=True)


def inception_score(
    batch: ImageBatch,
    metric: PerceptualMetric | None = None,
    splits: int = 10,
    seed: int = 0,
    min_images: int = MIN_IS_IMAGES,
) -> tuple:
    """Mean and standard deviation of the split-wise inception-style score."""
    n = batch.count
    if n < min_images:
        raise InputSizeError(f"inception score needs >= {min_images} images, got {n}")
    if splits < 1 or splits > n:
        raise ValidationError(f"splits must lie in 1..{n}, got {splits}")
    if metric is None:
        metric = PerceptualMetric()
    probs = metric.class_probabilities(batch.images)
    order = np.random.default_rng(seed).permutation(n)
    scores = []
    for part in np.array_split(probs[order], splits, axis=0):
        marginal = part.mean(axis=0, keepdims=True)
        kl = np.sum(part * (np.log(part + 1e-12) - np.log(marginal + 1e-12)), axis=1)
        mean_kl = float(np.mean(np.maximum(kl, 0.0)))
        if mean_kl < _KL_FLOOR:
            mean_kl = 0.0
        scores.append(float(np.exp(mean_kl)))
    return float(np.mean(scores)), float(np.std(scores))
