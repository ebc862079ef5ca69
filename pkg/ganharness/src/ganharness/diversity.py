"""Intra-class diversity analysis over generated image batches.

For each class, images are split into two halves with a seeded shuffle and
the perceptual distance is evaluated on every cross-half pair (optionally
a seeded subsample); pairs scoring below the threshold count as similar.
A collapsed generator-input distribution shows up directly as an inflated
similar-pair count. The module also wraps the seeded 2-D embedding used
for scatter plots.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np
from sklearn.manifold import TSNE

from .errors import InputSizeError, ValidationError
from .gimg import ImageBatch
from .metric import DEFAULT_THRESHOLD, PerceptualMetric, inception_score


@dataclass
class ClassDiversity:
    class_label: int
    similar_pair_count: int
    pairs_evaluated: int

    def __post_init__(self):
        if not 0 <= self.similar_pair_count <= self.pairs_evaluated:
            raise ValidationError(
                f"class {self.class_label}: {self.similar_pair_count} similar of "
                f"{self.pairs_evaluated} pairs is inconsistent"
            )


@dataclass
class SourceDiversity:
    source: str
    classes: list
    inception: tuple | None = None
    embedding: np.ndarray | None = None

    @property
    def total_similar(self) -> int:
        return sum(c.similar_pair_count for c in self.classes)

    @property
    def total_pairs(self) -> int:
        return sum(c.pairs_evaluated for c in self.classes)


@dataclass
class DiversityReport:
    threshold: float
    seed: int
    sources: list = field(default_factory=list)

    def source(self, name: str) -> SourceDiversity:
        for entry in self.sources:
            if entry.source == name:
                return entry
        raise KeyError(f"no source {name!r} in report")

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "seed": self.seed,
            "sources": [
                {
                    "source": entry.source,
                    "inception_score": (
                        None
                        if entry.inception is None
                        else {"mean": entry.inception[0], "std": entry.inception[1]}
                    ),
                    "tsne": (
                        None
                        if entry.embedding is None
                        else [[float(x), float(y)] for x, y in entry.embedding]
                    ),
                    "classes": [
                        {
                            "class": c.class_label,
                            "similar_pairs": c.similar_pair_count,
                            "pairs_evaluated": c.pairs_evaluated,
                        }
                        for c in entry.classes
                    ],
                    "total_similar_pairs": entry.total_similar,
                    "total_pairs_evaluated": entry.total_pairs,
                }
                for entry in self.sources
            ],
        }

    def write_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["source", "class", "similar_pairs", "pairs_evaluated"])
            for entry in self.sources:
                for c in entry.classes:
                    writer.writerow(
                        [entry.source, c.class_label, c.similar_pair_count,
                         c.pairs_evaluated]
                    )
                writer.writerow(
                    [entry.source, "total", entry.total_similar, entry.total_pairs]
                )


def count_similar_pairs(
    batch: ImageBatch,
    metric: PerceptualMetric | None = None,
    threshold: float = DEFAULT_THRESHOLD,
    seed: int = 0,
    max_pairs_per_class: int | None = None,
) -> SourceDiversity:
    """Seeded half-split cross-pair counting for every class in the batch."""
    if not 0.0 < threshold < 1.0:
        raise ValidationError(f"threshold must lie in (0, 1), got {threshold}")
    if max_pairs_per_class is not None and max_pairs_per_class < 1:
        raise ValidationError("max_pairs_per_class must be positive")
    if metric is None:
        metric = PerceptualMetric()
    labels = batch.labels
    class_values = [int(v) for v in np.unique(labels)]
    for value in class_values:
        if int(np.sum(labels == value)) < 2:
            raise ValidationError(f"class {value} has fewer than 2 images")

    feats = metric.featurize(batch.images)
    rng = np.random.default_rng(seed)
    entries = []
    for value in class_values:
        idx = np.flatnonzero(labels == value)
        perm = rng.permutation(idx)
        half = perm.shape[0] // 2
        left, right = perm[:half], perm[half:]
        scores = metric.cross_scores(feats, left, right).reshape(-1)
        if max_pairs_per_class is not None and scores.shape[0] > max_pairs_per_class:
            pick = rng.choice(scores.shape[0], max_pairs_per_class, replace=False)
            scores = scores[pick]
        entries.append(
            ClassDiversity(
                class_label=value,
                similar_pair_count=int(np.count_nonzero(scores < threshold)),
                pairs_evaluated=int(scores.shape[0]),
            )
        )
    return SourceDiversity(source=batch.source, classes=entries)


def evaluate_diversity(
    batches: list,
    threshold: float = DEFAULT_THRESHOLD,
    seed: int = 0,
    max_pairs_per_class: int | None = None,
    with_inception: bool = False,
    with_embedding: bool = False,
    metric: PerceptualMetric | None = None,
) -> DiversityReport:
    if not batches:
        raise ValidationError("need at least one image batch")
    if metric is None:
        metric = PerceptualMetric()
    report = DiversityReport(threshold=threshold, seed=seed)
    for batch in batches:
        entry = count_similar_pairs(
            batch,
            metric=metric,
            threshold=threshold,
            seed=seed,
            max_pairs_per_class=max_pairs_per_class,
        )
        if with_inception:
            entry.inception = inception_score(batch, metric=metric, seed=seed)
        if with_embedding:
            entry.embedding = tsne_embed(batch, metric=metric, seed=seed)
        report.sources.append(entry)
    return report


def tsne_embed(
    batch: ImageBatch,
    metric: PerceptualMetric | None = None,
    seed: int = 0,
    perplexity: float = 30.0,
) -> np.ndarray:
    """Seeded 2-D embedding of pooled perceptual features, (n, 2)."""
    n = batch.count
    if n < 50:
        raise InputSizeError(f"t-SNE embedding needs >= 50 images, got {n}")
    if perplexity <= 0.0:
        raise ValidationError(f"perplexity must be positive, got {perplexity}")
    if metric is None:
        metric = PerceptualMetric()
    features = metric.embed_features(batch.images).astype(np.float64)
    effective = min(float(perplexity), (n - 1) / 3.0)
    model = TSNE(
        n_components=2,
        random_state=seed,
        init="pca",
        perplexity=effective,
    )
    return model.fit_transform(features).astype(np.float64)


def write_scatter_csv(path, batch: ImageBatch, coords: np.ndarray) -> None:
    coords = np.asarray(coords, dtype=np.float64)
    if coords.shape != (batch.count, 2):
        raise ValidationError(
            f"coordinates shape {coords.shape} does not match {batch.count} images"
        )
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "class", "x", "y"])
        for i in range(batch.count):
            writer.writerow(
                [i, int(batch.labels[i]), f"{coords[i, 0]:.6f}", f"{coords[i, 1]:.6f}"]
            )
