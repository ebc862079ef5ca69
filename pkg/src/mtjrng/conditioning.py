"""Post-processing that upgrades raw device bits to full-entropy streams.

Two schemes: XOR-3 parity compression (piling-up lemma: input bias eps
becomes 4*eps^3) and seeded Toeplitz-matrix extraction over GF(2), computed
through real FFT convolution with an exactness guard. A naive big-integer
route implements the same Toeplitz contract for cross-checking.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .bitstream import RawBitstream, pack_bits
from .errors import ConfigError, InputSizeError, PrecisionError, ValidationError

FFT_MAX_BLOCK = 1 << 20
_ROUND_TOL = 0.25


def xor3(stream: RawBitstream, *, grouping: str = "temporal",
         stride: int | None = None) -> RawBitstream:
    """Parity of bit triples; output length floor(n_bits / 3).

    "temporal" folds consecutive stream bits. "spatial-stride" folds bits
    (k, k+s, k+2s) within consecutive 3s-bit blocks (s defaults to the
    stream's device count), pairing each device with itself across three
    cycles; a trailing block shorter than 3s is discarded.
    """
    if stream.n_bits < 3:
        raise InputSizeError(
            f"XOR-3 needs at least 3 input bits, got {stream.n_bits}"
        )
    bits = stream.bits()
    if grouping == "temporal":
        n_out = stream.n_bits // 3
        folded = bits[: 3 * n_out].reshape(n_out, 3)
        out = folded[:, 0] ^ folded[:, 1] ^ folded[:, 2]
    elif grouping == "spatial-stride":
        s = stride if stride is not None else stream.n_devices
        if s < 1:
            raise ValidationError(f"stride must be positive, got {s}")
        n_groups = stream.n_bits // (3 * s)
        if n_groups == 0:
            raise InputSizeError(
                f"spatial-stride XOR-3 needs at least {3 * s} bits, "
                f"got {stream.n_bits}"
            )
        folded = bits[: 3 * s * n_groups].reshape(n_groups, 3, s)
        out = (folded[:, 0] ^ folded[:, 1] ^ folded[:, 2]).reshape(-1)
    else:
        raise ValidationError(f"unknown grouping {grouping!r}")
    return RawBitstream(
        data=pack_bits(out),
        n_bits=int(out.size),
        source="mtj-xor3",
        n_devices=stream.n_devices,
        master_seed=stream.master_seed,
    )


@dataclass(frozen=True, eq=False)
class ToeplitzConfig:
    """Extraction matrix geometry: T[i][j] = seed_bits[i - j + n - 1]."""

    n: int
    m: int
    seed_bits: np.ndarray

    def __post_init__(self):
        if not 0 < self.m < self.n:
            raise ConfigError(f"need 0 < m < n, got n={self.n}, m={self.m}")
        seed = np.asarray(self.seed_bits, dtype=np.uint8)
        if seed.ndim != 1 or seed.size != self.n + self.m - 1:
            raise ConfigError(
                f"seed must hold n+m-1 = {self.n + self.m - 1} bits, "
                f"got {seed.size}"
            )
        if seed.size and seed.max() > 1:
            raise ConfigError("seed bits must be 0 or 1")
        object.__setattr__(self, "seed_bits", seed)

    @property
    def compression_ratio(self) -> float:
        return self.m / self.n

    @property
    def seed_hex(self) -> str:
        return np.packbits(self.seed_bits, bitorder="big").tobytes().hex()

    @classmethod
    def from_json(cls, source) -> "ToeplitzConfig":
        """Build from a JSON file path or a parsed dict.

        Expects keys n, m, seed_hex; seed bit 0 is the MSB of the first hex
        byte and trailing pad bits of the last byte must be zero.
        """
        if isinstance(source, dict):
            doc = source
        else:
            try:
                with open(source, "r", encoding="utf-8") as fh:
                    doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{source}: invalid JSON ({exc})") from exc
        for key in ("n", "m", "seed_hex"):
            if key not in doc:
                raise ConfigError(f"Toeplitz config missing key {key!r}")
        n, m = int(doc["n"]), int(doc["m"])
        n_seed = n + m - 1
        try:
            raw = bytes.fromhex(doc["seed_hex"])
        except ValueError as exc:
            raise ConfigError(f"seed_hex is not valid hex: {exc}") from exc
        if len(raw) != (n_seed + 7) // 8:
            raise ConfigError(
                f"seed_hex holds {len(raw)} bytes, expected "
                f"{(n_seed + 7) // 8} for {n_seed} bits"
            )
        all_bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="big")
        if all_bits[n_seed:].any():
            raise ConfigError("seed_hex pad bits past n+m-1 must be zero")
        return cls(n=n, m=m, seed_bits=all_bits[:n_seed])


def seed_bits_from_stream(stream: RawBitstream, n: int, m: int) -> ToeplitzConfig:
    """Draw a Toeplitz seed from the leading n+m-1 bits of a stream."""
    need = n + m - 1
    if stream.n_bits < need:
        raise InputSizeError(
            f"need {need} bits for the Toeplitz seed, stream has {stream.n_bits}"
        )
    return ToeplitzConfig(n=n, m=m, seed_bits=stream.bits()[:need])


def _output_meta(stream: RawBitstream, out_bits: np.ndarray) -> RawBitstream:
    return RawBitstream(
        data=pack_bits(out_bits),
        n_bits=int(out_bits.size),
        source="mtj-toeplitz",
        n_devices=stream.n_devices,
        master_seed=stream.master_seed,
    )


def toeplitz_extract(stream: RawBitstream, cfg: ToeplitzConfig,
                     *, batch_blocks: int | None = None) -> RawBitstream:
    """Blockwise y = T.x over GF(2) via real-FFT convolution.

    Consecutive n-bit blocks map to m-bit outputs; a trailing partial block
    is discarded. Convolution sums are exact integers below 2**53, enforced
    by the n <= 2**20 cap and the rounding-residue guard, so the result is
    bit-identical to the naive matrix-vector product.
    """
    n, m = cfg.n, cfg.m
    if n > FFT_MAX_BLOCK:
        raise PrecisionError(
            f"block length {n} exceeds {FFT_MAX_BLOCK}; convolution sums "
            f"would no longer round exactly in double precision"
        )
    n_blocks = stream.n_bits // n
    if n_blocks == 0:
        raise InputSizeError(
            f"input has {stream.n_bits} bits, need at least one {n}-bit block"
        )
    bits = stream.bits()[: n_blocks * n].reshape(n_blocks, n)

    full_len = n + cfg.seed_bits.size - 1
    fft_len = 1 << max(1, (full_len - 1).bit_length())
    seed_f = np.fft.rfft(cfg.seed_bits.astype(np.float64), fft_len)

    if batch_blocks is None:
        batch_blocks = max(1, (1 << 22) // fft_len)
    pieces = []
    for start in range(0, n_blocks, batch_blocks):
        chunk = bits[start:start + batch_blocks].astype(np.float64)
        conv = np.fft.irfft(np.fft.rfft(chunk, fft_len, axis=1) * seed_f, fft_len,
                            axis=1)
        window = conv[:, n - 1:n - 1 + m]
        rounded = np.rint(window)
        residue = float(np.max(np.abs(window - rounded))) if window.size else 0.0
        if residue > _ROUND_TOL:
            raise PrecisionError(
                f"FFT convolution residue {residue:.3g} exceeds {_ROUND_TOL}; "
                f"block length too large for exact rounding"
            )
        pieces.append((rounded.astype(np.int64) & 1).astype(np.uint8))
    out = np.concatenate(pieces).reshape(-1)
    return _output_meta(stream, out)


def toeplitz_extract_naive(stream: RawBitstream, cfg: ToeplitzConfig) -> RawBitstream:
    """Same contract as toeplitz_extract via big-integer column XOR.

    Column j of T, read as an integer with row i at bit i, is a window of
    the seed; the product is the XOR of columns where the input bit is 1.
    """
    n, m = cfg.n, cfg.m
    n_blocks = stream.n_bits // n
    if n_blocks == 0:
        raise InputSizeError(
            f"input has {stream.n_bits} bits, need at least one {n}-bit block"
        )
    bits = stream.bits()[: n_blocks * n].reshape(n_blocks, n)
    seed_int = int.from_bytes(
        np.packbits(cfg.seed_bits, bitorder="little").tobytes(), "little"
    )
    col_mask = (1 << m) - 1
    acc_bytes = (m + 7) // 8
    out = np.empty((n_blocks, m), dtype=np.uint8)
    for b in range(n_blocks):
        acc = 0
        for j in np.flatnonzero(bits[b]):
            acc ^= (seed_int >> (n - 1 - int(j))) & col_mask
        packed = np.frombuffer(acc.to_bytes(acc_bytes, "little"), dtype=np.uint8)
        out[b] = np.unpackbits(packed, count=m, bitorder="little")
    return _output_meta(stream, out.reshape(-1))


@dataclass(frozen=True)
class EntropyEstimate:
    """Most-common-value min-entropy bound for a binary stream."""

    h_min_per_bit: float
    p_max_upper: float
    sample_size: int


def estimate_min_entropy(stream: RawBitstream) -> EntropyEstimate:
    """MCV estimator with a 99% upper confidence bound on p_max."""
    n = stream.n_bits
    if n < 10**4:
        raise InputSizeError(f"need at least 10^4 bits to estimate, got {n}")
    ones = int(np.count_nonzero(stream.bits()))
    p_hat = max(ones, n - ones) / n
    upper = min(1.0, p_hat + 2.576 * math.sqrt(p_hat * (1.0 - p_hat) / n))
    return EntropyEstimate(
        h_min_per_bit=-math.log2(upper),
        p_max_upper=upper,
        sample_size=n,
    )
