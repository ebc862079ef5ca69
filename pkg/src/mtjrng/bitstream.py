"""Packed bitstreams and the MTJB container format.

Bit convention used everywhere in this package: bit k of a stream lives in
byte k >> 3 at position 7 - (k & 7), i.e. MSB-first within each byte
(numpy's ``bitorder="big"``). Trailing pad bits of the last byte are zero.

MTJB file layout (all integers little-endian):

    magic   4 bytes  b"MTJB"
    version u16      1
    source  u8       tag code (see SOURCE_TAGS)
    devices u8       number of parallel devices (1 for single generators)
    n_bits  u64
    seed    u64      master seed of the producing generator
    payload packed bits, MSB-first
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError, ValidationError

MAGIC = b"MTJB"
VERSION = 1
_HEADER = struct.Struct("<4sHBBQQ")

SOURCE_TAGS = {
    "mtj-raw": 0,
    "mtj-xor3": 1,
    "mtj-toeplitz": 2,
    "lfsr32": 3,
    "xoroshiro128p": 4,
    "external": 5,
}
_TAG_NAMES = {v: k for k, v in SOURCE_TAGS.items()}

_MASK64 = (1 << 64) - 1


def pack_bits(bits: np.ndarray) -> bytes:
    """Pack an array of 0/1 values MSB-first; pads the last byte with zeros."""
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.ndim != 1:
        raise ValidationError("bit array must be one-dimensional")
    if bits.size and bits.max() > 1:
        raise ValidationError("bit array may only contain 0 and 1")
    return np.packbits(bits, bitorder="big").tobytes()


def unpack_bits(data: bytes, n_bits: int) -> np.ndarray:
    """Inverse of pack_bits; returns a uint8 array of exactly n_bits values."""
    buf = np.frombuffer(data, dtype=np.uint8)
    if n_bits > 8 * buf.size:
        raise ValidationError(f"requested {n_bits} bits from {8 * buf.size}-bit buffer")
    return np.unpackbits(buf, count=n_bits, bitorder="big")


@dataclass
class RawBitstream:
    """A packed random bit sequence plus provenance metadata."""

    data: bytes
    n_bits: int
    source: str = "external"
    n_devices: int = 1
    interleave: str = "cycle-major"
    master_seed: int = 0

    def __post_init__(self):
        if self.source not in SOURCE_TAGS:
            raise ValidationError(f"unknown source tag {self.source!r}")
        if self.n_bits < 0 or self.n_bits > 8 * len(self.data):
            raise ValidationError(
                f"n_bits={self.n_bits} does not fit in {len(self.data)} bytes"
            )
        if self.interleave != "cycle-major":
            raise ValidationError(f"unsupported interleave {self.interleave!r}")
        self._check_padding()

    def _check_padding(self):
        pad = 8 * len(self.data) - self.n_bits
        if pad == 0:
            return
        if pad >= 8:
            raise ValidationError("payload longer than needed for n_bits")
        last = self.data[-1]
        if last & ((1 << pad) - 1):
            raise ValidationError("trailing pad bits must be zero")

    @classmethod
    def from_bits(cls, bits: np.ndarray, **meta) -> "RawBitstream":
        bits = np.asarray(bits, dtype=np.uint8)
        return cls(data=pack_bits(bits), n_bits=int(bits.size), **meta)

    def bits(self) -> np.ndarray:
        """Unpacked 0/1 uint8 array of length n_bits."""
        return unpack_bits(self.data, self.n_bits)

    @property
    def n_cycles(self) -> int:
        """Acquisition cycles represented (cycle-major interleave)."""
        if self.n_devices <= 0:
            raise ValidationError("n_cycles undefined for n_devices <= 0")
        return -(-self.n_bits // self.n_devices)

    def write(self, path) -> None:
        header = _HEADER.pack(
            MAGIC,
            VERSION,
            SOURCE_TAGS[self.source],
            self.n_devices,
            self.n_bits,
            self.master_seed & _MASK64,
        )
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(self.data)

    @classmethod
    def read(cls, path) -> "RawBitstream":
        with open(path, "rb") as fh:
            raw = fh.read()
        if len(raw) < _HEADER.size:
            raise FormatError(f"file too short for MTJB header ({len(raw)} bytes)")
        magic, version, tag, n_devices, n_bits, seed = _HEADER.unpack_from(raw)
        if magic != MAGIC:
            raise FormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
        if version != VERSION:
            raise FormatError(f"unsupported MTJB version {version}")
        if tag not in _TAG_NAMES:
            raise FormatError(f"unknown source tag code {tag}")
        payload = raw[_HEADER.size:]
        need = (n_bits + 7) // 8
        if len(payload) < need:
            raise FormatError(
                f"truncated payload: {need - len(payload)} bytes missing"
            )
        try:
            return cls(
                data=payload[:need],
                n_bits=n_bits,
                source=_TAG_NAMES[tag],
                n_devices=n_devices,
                master_seed=seed,
            )
        except ValidationError as exc:
            raise FormatError(str(exc)) from exc
