"""GANC checkpoint container for generator weights.

Deterministic little-endian layout:

    offset 0   4 bytes  magic "GANC"
    offset 4   uint16   version (1)
    offset 6   uint32   JSON header byte length
    then       utf-8    JSON header (sorted keys): {"arch": {...},
               "tensors": [{"name", "shape", "offset", "nbytes"}, ...]}
    then       float32  tensor blobs at the stated offsets (relative to the
               end of the header), little endian, C order

The architecture block is opaque to this module; the generator validates
it against the networks it knows how to run.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError, ValidationError

_MAGIC = b"GANC"
_VERSION = 1
_HEADER = struct.Struct("<4sHI")


@dataclass
class GeneratorCheckpoint:
    arch: dict
    tensors: dict = field(default_factory=dict)

    def tensor(self, name: str) -> np.ndarray:
        if name not in self.tensors:
            raise ValidationError(f"checkpoint has no tensor {name!r}")
        return self.tensors[name]


def write_checkpoint(path, ckpt: GeneratorCheckpoint) -> None:
    manifest = []
    blobs = []
    offset = 0
    for name in sorted(ckpt.tensors):
        arr = np.ascontiguousarray(ckpt.tensors[name], dtype="<f4")
        raw = arr.tobytes()
        manifest.append(
            {
                "name": name,
                "shape": list(arr.shape),
                "offset": offset,
                "nbytes": len(raw),
            }
        )
        blobs.append(raw)
        offset += len(raw)
    header = json.dumps(
        {"arch": ckpt.arch, "tensors": manifest},
        sort_keys=True,
        separators=(",", ":"),
    ).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, _VERSION, len(header)))
        fh.write(header)
        for raw in blobs:
            fh.write(raw)


def read_checkpoint(path) -> GeneratorCheckpoint:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise FormatError(f"{path}: too short for a GANC header ({len(raw)} bytes)")
    magic, version, header_len = _HEADER.unpack_from(raw)
    if magic != _MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if version != _VERSION:
        raise FormatError(f"{path}: unsupported GANC version {version}")
    if len(raw) < _HEADER.size + header_len:
        raise FormatError(f"{path}: truncated JSON header")
    try:
        doc = json.loads(raw[_HEADER.size : _HEADER.size + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: invalid checkpoint header ({exc})") from exc
    if not isinstance(doc, dict) or "arch" not in doc or "tensors" not in doc:
        raise FormatError(f"{path}: checkpoint header missing arch/tensors")
    blob = raw[_HEADER.size + header_len:]
    tensors = {}
    for entry in doc["tensors"]:
        name, shape = entry["name"], tuple(entry["shape"])
        start, nbytes = entry["offset"], entry["nbytes"]
        if start + nbytes > len(blob):
            raise FormatError(f"{path}: tensor {name!r} extends past end of file")
        count = int(np.prod(shape, dtype=np.int64)) if shape else 1
        if nbytes != 4 * count:
            raise FormatError(
                f"{path}: tensor {name!r} declares {nbytes} bytes for shape {shape}"
            )
        tensors[name] = (
            np.frombuffer(blob[start : start + nbytes], dtype="<f4")
            .reshape(shape)
            .copy()
        )
    return GeneratorCheckpoint(arch=doc["arch"], tensors=tensors)
