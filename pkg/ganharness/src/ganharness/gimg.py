"""GIMG container for generated image batches.

A deterministic little-endian binary layout (byte-identical reruns, unlike
zip-based containers that embed timestamps):

    offset 0   4 bytes  magic "GIMG"
    offset 4   uint16   version (1)
    offset 6   uint32   image count
    offset 10  uint16   source-tag byte length
    then       utf-8    source tag (which RNG produced the latents)
    then       uint8    one class label per image, values 1..10
    then       uint8    images, count x 64 x 64 x 3, RGB

Pixel values are 8-bit; the generator quantizes its [-1, 1] output once at
save time so identical latent rows stay pixel-identical.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import FormatError, ValidationError

IMAGE_SIZE = 64
CHANNELS = 3
N_CLASSES = 10

_MAGIC = b"GIMG"
_VERSION = 1
_HEADER = struct.Struct("<4sHIH")


@dataclass
class ImageBatch:
    """Generated images plus the class labels and source tag they came from."""

    images: np.ndarray
    labels: np.ndarray
    source: str = "unknown"

    def __post_init__(self):
        self.images = np.asarray(self.images, dtype=np.uint8)
        self.labels = np.asarray(self.labels, dtype=np.uint8)
        n = self.images.shape[0] if self.images.ndim else 0
        if self.images.shape != (n, IMAGE_SIZE, IMAGE_SIZE, CHANNELS):
            raise ValidationError(
                f"images must be (n, {IMAGE_SIZE}, {IMAGE_SIZE}, {CHANNELS}), "
                f"got {self.images.shape}"
            )
        if self.labels.shape != (n,):
            raise ValidationError(
                f"need one label per image, got {self.labels.shape} for {n} images"
            )
        if n and (self.labels.min() < 1 or self.labels.max() > N_CLASSES):
            raise ValidationError(f"class labels must lie in 1..{N_CLASSES}")

    @property
    def count(self) -> int:
        return int(self.images.shape[0])


def write_images(path, batch: ImageBatch) -> None:
    tag = batch.source.encode("utf-8")
    if len(tag) > 0xFFFF:
        raise ValidationError("source tag too long")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, _VERSION, batch.count, len(tag)))
        fh.write(tag)
        fh.write(batch.labels.tobytes())
        fh.write(np.ascontiguousarray(batch.images).tobytes())


def read_images(path) -> ImageBatch:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise FormatError(f"{path}: too short for a GIMG header ({len(raw)} bytes)")
    magic, version, count, tag_len = _HEADER.unpack_from(raw)
    if magic != _MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if version != _VERSION:
        raise FormatError(f"{path}: unsupported GIMG version {version}")
    body = raw[_HEADER.size:]
    pixels = count * IMAGE_SIZE * IMAGE_SIZE * CHANNELS
    need = tag_len + count + pixels
    if len(body) != need:
        raise FormatError(f"{path}: payload holds {len(body)} bytes, expected {need}")
    try:
        source = body[:tag_len].decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path}: source tag is not valid UTF-8") from exc
    labels = np.frombuffer(body[tag_len : tag_len + count], dtype=np.uint8).copy()
    images = (
        np.frombuffer(body[tag_len + count :], dtype=np.uint8)
        .reshape(count, IMAGE_SIZE, IMAGE_SIZE, CHANNELS)
        .copy()
    )
    try:
        return ImageBatch(images=images, labels=labels, source=source)
    except ValidationError as exc:
        raise FormatError(f"{path}: {exc}") from exc
