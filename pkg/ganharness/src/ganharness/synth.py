"""Procedural class-conditioned images for desk-scale training and tests.

Ten classes, each anchored to a distinct base color with a class-dependent
number of soft blobs at random positions over a smooth noise background.
The point is not realism: the families give the generator a target
distribution with clear between-class structure and plenty of within-class
variation, entirely reproducible from a seed.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from .errors import ValidationError

IMAGE_SIZE = 64
N_CLASSES = 10

# Base colors per class in [-1, 1] RGB, chosen for mutual separation.
CLASS_COLORS = np.array(
    [
        [0.9, -0.6, -0.6],
        [0.9, 0.4, -0.7],
        [0.8, 0.8, -0.6],
        [0.1, 0.8, -0.5],
        [-0.6, 0.8, -0.2],
        [-0.7, 0.8, 0.7],
        [-0.6, 0.2, 0.9],
        [-0.5, -0.4, 0.9],
        [0.4, -0.5, 0.8],
        [0.8, -0.5, 0.3],
    ],
    dtype=np.float64,
)

_GRID_Y, _GRID_X = np.mgrid[0:IMAGE_SIZE, 0:IMAGE_SIZE].astype(np.float64)


def synth_batch(class_label: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """n images of one class, float32 (n, 3, 64, 64) in [-1, 1]."""
    if not 1 <= class_label <= N_CLASSES:
        raise ValidationError(f"class label must lie in 1..{N_CLASSES}")
    if n < 1:
        raise ValidationError(f"batch size must be positive, got {n}")
    base = CLASS_COLORS[class_label - 1]
    brightness = rng.uniform(0.6, 0.9, (n, 1, 1, 1))
    images = base[None, :, None, None] * brightness

    rough = rng.normal(0.0, 0.25, (n, 3, 8, 8))
    images = images + ndimage.zoom(rough, (1, 1, 8, 8), order=1)

    n_blobs = 1 + (class_label - 1) % 3
    for _ in range(n_blobs):
        cy = rng.uniform(8, IMAGE_SIZE - 8, n)
        cx = rng.uniform(8, IMAGE_SIZE - 8, n)
        radius = rng.uniform(5.0, 14.0, n)
        tint = rng.uniform(-1.0, 1.0, (n, 3))
        d2 = (_GRID_Y[None] - cy[:, None, None]) ** 2 + (
            _GRID_X[None] - cx[:, None, None]
        ) ** 2
        falloff = np.exp(-d2 / (2.0 * radius[:, None, None] ** 2))
        images = images + 0.8 * tint[:, :, None, None] * falloff[:, None]

    return np.clip(images, -1.0, 1.0).astype(np.float32)


def synth_dataset(per_class: int, seed: int = 0) -> tuple:
    """Balanced dataset over all classes: (images (N,3,64,64), labels (N,))."""
    rng = np.random.default_rng(seed)
    images = []
    labels = []
    for label in range(1, N_CLASSES + 1):
        images.append(synth_batch(label, per_class, rng))
        labels.append(np.full(per_class, label, dtype=np.uint8))
    return np.concatenate(images, axis=0), np.concatenate(labels, axis=0)
