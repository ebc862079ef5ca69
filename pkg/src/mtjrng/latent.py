"""Conversion of conditioned bitstreams into generator latent matrices.

Each image row holds 100 random values in [-1, 1] followed by a 10-way
one-hot class block, 110 single-precision dims total. Every random value
consumes one 32-bit word (MSB-first), so one image costs exactly 3,200 bits.
The LATF container carries the matrix to the inference harness.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .bitstream import RawBitstream
from .errors import FormatError, InputSizeError, ValidationError

LATENT_DIMS = 110
RANDOM_DIMS = 100
N_CLASSES = 10
BITS_PER_IMAGE = 32 * RANDOM_DIMS

LATF_MAGIC = b"LATF"
LATF_VERSION = 1
_LATF_HEADER = struct.Struct("<4sHII")

_WORD_SCALE = float(2**32 - 1)


def words_from_bits(stream: RawBitstream) -> np.ndarray:
    """Consecutive 32-bit words, first-consumed bit most significant."""
    if stream.n_bits < 32:
        raise InputSizeError(
            f"need at least 32 bits to form a word, got {stream.n_bits}"
        )
    n_words = stream.n_bits // 32
    bits = stream.bits()[: 32 * n_words]
    packed = np.packbits(bits, bitorder="big")
    return packed.view(">u4").astype(np.uint64).reshape(-1)


def word_to_unit(word) -> np.ndarray:
    """Map a 32-bit word onto [-1, 1] (both endpoints attainable), float32."""
    w = np.asarray(word, dtype=np.float64)
    return (2.0 * w / _WORD_SCALE - 1.0).astype(np.float32)


@dataclass
class LatentMatrix:
    """rows x 110 single-precision latent vectors plus per-row class labels."""

    values: np.ndarray
    class_labels: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float32)
        self.class_labels = np.asarray(self.class_labels, dtype=np.uint8)
        if self.values.ndim != 2 or self.values.shape[1] != LATENT_DIMS:
            raise ValidationError(
                f"latent matrix must be rows x {LATENT_DIMS}, "
                f"got {self.values.shape}"
            )
        if self.class_labels.shape != (self.values.shape[0],):
            raise ValidationError("one class label per row required")
        if self.values.shape[0] == 0:
            return
        if self.class_labels.min() < 1 or self.class_labels.max() > N_CLASSES:
            raise ValidationError(f"class labels must lie in 1..{N_CLASSES}")
        rand = self.values[:, :RANDOM_DIMS]
        if np.any(rand < -1.0) or np.any(rand > 1.0):
            raise ValidationError("random dims must lie in [-1, 1]")
        onehot = self.values[:, RANDOM_DIMS:]
        expected = np.zeros_like(onehot)
        expected[np.arange(self.rows), self.class_labels - 1] = 1.0
        if not np.array_equal(onehot, expected):
            raise ValidationError("class dims must one-hot encode the labels")

    @property
    def rows(self) -> int:
        return self.values.shape[0]


def build_latent_matrix(stream: RawBitstream, n_images: int, labels) -> LatentMatrix:
    """Consume 3200 bits per image sequentially and attach one-hot labels."""
    if n_images < 1:
        raise ValidationError(f"n_images must be positive, got {n_images}")
    labels = np.asarray(list(labels), dtype=np.int64)
    if labels.shape != (n_images,):
        raise ValidationError(
            f"need {n_images} labels, got {labels.shape[0] if labels.ndim else 0}"
        )
    if labels.min() < 1 or labels.max() > N_CLASSES:
        raise ValidationError(f"class labels must lie in 1..{N_CLASSES}")
    need = BITS_PER_IMAGE * n_images
    if stream.n_bits < need:
        raise InputSizeError(
            f"need {need} bits for {n_images} images, stream has {stream.n_bits}"
        )
    words = words_from_bits(stream)[: RANDOM_DIMS * n_images]
    values = np.zeros((n_images, LATENT_DIMS), dtype=np.float32)
    values[:, :RANDOM_DIMS] = word_to_unit(words).reshape(n_images, RANDOM_DIMS)
    values[np.arange(n_images), RANDOM_DIMS - 1 + labels] = 1.0
    return LatentMatrix(values=values, class_labels=labels.astype(np.uint8))


def write_latent(path, matrix: LatentMatrix) -> None:
    header = _LATF_HEADER.pack(LATF_MAGIC, LATF_VERSION, matrix.rows, LATENT_DIMS)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(matrix.values.astype("<f4").tobytes(order="C"))
        fh.write(matrix.class_labels.astype(np.uint8).tobytes())


def read_latent(path) -> LatentMatrix:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _LATF_HEADER.size:
        raise FormatError(f"file too short for LATF header ({len(raw)} bytes)")
    magic, version, rows, dims = _LATF_HEADER.unpack_from(raw)
    if magic != LATF_MAGIC:
        raise FormatError(f"bad magic {magic!r}, expected {LATF_MAGIC!r}")
    if version != LATF_VERSION:
        raise FormatError(f"unsupported LATF version {version}")
    if dims != LATENT_DIMS:
        raise FormatError(f"expected {LATENT_DIMS} dims, file declares {dims}")
    need = rows * dims * 4 + rows
    payload = raw[_LATF_HEADER.size:]
    if len(payload) < need:
        raise FormatError(f"truncated payload: {need - len(payload)} bytes missing")
    floats = np.frombuffer(payload[: rows * dims * 4], dtype="<f4")
    labels = np.frombuffer(
        payload[rows * dims * 4: need], dtype=np.uint8
    )
    try:
        return LatentMatrix(
            values=floats.reshape(rows, dims).copy(),
            class_labels=labels.copy(),
        )
    except ValidationError as exc:
        raise FormatError(str(exc)) from exc
