"""Reader for LATF latent-code files.

The format is owned by the upstream bit pipeline; this module reimplements
it from the published layout so the harness has no code dependency on the
producer. Layout, all little endian:

    offset 0   4 bytes  magic "LATF"
    offset 4   uint16   version (1)
    offset 6   uint32   row count
    offset 10  uint32   dims per row (110)
    offset 14  float32  rows * dims matrix, C order
    then       uint8    one class label per row, values 1..10

Each row holds 100 random values in [-1, 1] followed by a 10-way one-hot
class block that must agree with the trailing label byte.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import FormatError

LATENT_DIMS = 110
RANDOM_DIMS = 100
N_CLASSES = 10

_MAGIC = b"LATF"
_VERSION = 1
_HEADER = struct.Struct("<4sHII")


@dataclass
class LatentFile:
    """Parsed latent matrix plus per-row class labels (1..10)."""

    values: np.ndarray
    labels: np.ndarray

    @property
    def rows(self) -> int:
        return int(self.values.shape[0])


def read_latent_file(path) -> LatentFile:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise FormatError(f"{path}: too short for a LATF header ({len(raw)} bytes)")
    magic, version, rows, dims = _HEADER.unpack_from(raw)
    if magic != _MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if version != _VERSION:
        raise FormatError(f"{path}: unsupported LATF version {version}")
    if dims != LATENT_DIMS:
        raise FormatError(f"{path}: expected {LATENT_DIMS} dims, file declares {dims}")
    need = rows * dims * 4 + rows
    payload = raw[_HEADER.size:]
    if len(payload) != need:
        raise FormatError(
            f"{path}: payload holds {len(payload)} bytes, expected {need}"
        )
    values = np.frombuffer(payload[: rows * dims * 4], dtype="<f4").reshape(rows, dims)
    labels = np.frombuffer(payload[rows * dims * 4:], dtype=np.uint8).copy()
    if rows and (labels.min() < 1 or labels.max() > N_CLASSES):
        raise FormatError(f"{path}: class labels must lie in 1..{N_CLASSES}")

    onehot = values[:, RANDOM_DIMS:]
    expected = np.zeros_like(onehot)
    if rows:
        expected[np.arange(rows), labels.astype(np.int64) - 1] = 1.0
    if not np.array_equal(onehot, expected):
        raise FormatError(f"{path}: one-hot class block disagrees with labels")
    return LatentFile(values=np.ascontiguousarray(values), labels=labels)
