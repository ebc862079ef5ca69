"""Desk-scale conditional generator and diversity analysis harness.

Consumes LATF latent-code files produced by an upstream random-bit
pipeline, renders them with a small checkpointed generator, and measures
intra-class diversity: perceptual similar-pair counts, an inception-style
score, and seeded 2-D embeddings.
"""

__version__ = "0.1.0"

from .checkpoint import GeneratorCheckpoint, read_checkpoint, write_checkpoint
from .diversity import (
    ClassDiversity,
    DiversityReport,
    SourceDiversity,
    count_similar_pairs,
    evaluate_diversity,
    tsne_embed,
    write_scatter_csv,
)
from .errors import (
    DependencyError,
    FormatError,
    GanHarnessError,
    InputSizeError,
    ValidationError,
)
from .generator import forward, generate_images, load_generator, validate_architecture
from .gimg import ImageBatch, read_images, write_images
from .latf import LatentFile, read_latent_file
from .metric import PerceptualMetric, inception_score

__all__ = [
    "ClassDiversity",
    "DependencyError",
    "DiversityReport",
    "FormatError",
    "GanHarnessError",
    "GeneratorCheckpoint",
    "ImageBatch",
    "InputSizeError",
    "LatentFile",
    "PerceptualMetric",
    "SourceDiversity",
    "ValidationError",
    "count_similar_pairs",
    "evaluate_diversity",
    "forward",
    "generate_images",
    "inception_score",
    "load_generator",
    "read_checkpoint",
    "read_images",
    "read_latent_file",
    "tsne_embed",
    "validate_architecture",
    "write_checkpoint",
    "write_images",
    "write_scatter_csv",
]
