"""Bitstream statistics plus throughput and energy scaling models.

The histogram and autocorrelation helpers quantify raw-stream defects that
the conditioning stages are supposed to remove. The throughput and energy
models are config-driven estimates of how the array scales with cell count;
their constants are inputs, not measurements.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bitstream import RawBitstream
from .errors import InputSizeError, ValidationError
from .latent import words_from_bits
from .nist.special import igamc

DEFAULT_HISTOGRAM_BINS = 256

# Per-cell switching + reset energy and amortized peripheral power. Chosen so
# a 10^6-cell array at 100 kHz lands near 1 pJ per XOR-3 conditioned bit.
DEFAULT_E_DEVICE = 0.3e-12
DEFAULT_E_SHARED = 1.0e-3
# Software CSPRNG cost band, joules per output bit (low, high).
DEFAULT_CSPRNG_RANGE = (1.0e-8, 1.0e-7)


@dataclass
class HistogramResult:
    """Word counts per bin with a chi-square uniformity verdict."""

    counts: np.ndarray
    n_words: int
    chi_square: float
    p_value: float


def word_histogram(stream: RawBitstream, bins: int = DEFAULT_HISTOGRAM_BINS) -> HistogramResult:
    """Bin consecutive 32-bit words into equal intervals of [0, 2^32).

    The chi-square statistic is tested against the uniform distribution with
    bins-1 degrees of freedom; a small p-value flags a biased word stream.
    """
    if bins < 2:
        raise ValidationError(f"bins must be at least 2, got {bins}")
    if stream.n_bits < 32 * bins:
        raise InputSizeError(
            f"need at least {32 * bins} bits for {bins} bins, got {stream.n_bits}"
        )
    words = words_from_bits(stream)
    idx = (words * np.uint64(bins)) >> np.uint64(32)
    counts = np.bincount(idx.astype(np.int64), minlength=bins)
    n_words = int(words.size)
    expected = n_words / bins
    chi_square = float(np.sum((counts - expected) ** 2) / expected)
    p_value = float(igamc((bins - 1) / 2.0, chi_square / 2.0))
    return HistogramResult(
        counts=counts, n_words=n_words, chi_square=chi_square, p_value=p_value
    )


@dataclass
class BiasAutocorrResult:
    mean: float
    bias: float
    autocorr: np.ndarray

    def lag(self, k: int) -> float:
        if not 1 <= k <= self.autocorr.size:
            raise ValidationError(f"lag {k} outside 1..{self.autocorr.size}")
        return float(self.autocorr[k - 1])


def bias_and_autocorr(stream: RawBitstream, max_lag: int = 8) -> BiasAutocorrResult:
    """Sample mean plus normalized autocorrelation at lags 1..max_lag.

    Each lag-k coefficient is mean(x_i * x_{i+k}) / var(x) over the centered
    bit sequence, so a strictly alternating stream scores exactly -1 at lag 1.
    A constant stream has zero variance; its coefficients are reported as 0.
    """
    if max_lag < 1:
        raise ValidationError(f"max_lag must be positive, got {max_lag}")
    if stream.n_bits < 100 * max_lag:
        raise InputSizeError(
            f"need at least {100 * max_lag} bits for max_lag={max_lag}, "
            f"got {stream.n_bits}"
        )
    x = stream.bits().astype(np.float64)
    mean = float(x.mean())
    x -= mean
    var = float(np.mean(x * x))
    autocorr = np.zeros(max_lag, dtype=np.float64)
    if var > 0.0:
        for k in range(1, max_lag + 1):
            autocorr[k - 1] = float(np.mean(x[:-k] * x[k:])) / var
    return BiasAutocorrResult(mean=mean, bias=mean - 0.5, autocorr=autocorr)


@dataclass(frozen=True)
class ThroughputModel:
    """Array-scaling model: cells x cycle rate, derated by conditioning."""

    n_cells: int
    cycle_hz: float
    conditioning_factor: float = 1.0

    def __post_init__(self):
        if self.n_cells < 1:
            raise ValidationError(f"n_cells must be positive, got {self.n_cells}")
        if self.cycle_hz <= 0.0:
            raise ValidationError(f"cycle_hz must be positive, got {self.cycle_hz}")
        if self.conditioning_factor <= 0.0:
            raise ValidationError(
                f"conditioning_factor must be positive, got {self.conditioning_factor}"
            )


@dataclass
class ThroughputEstimate:
    raw_bps: float
    conditioned_bps: float


def throughput(model: ThroughputModel) -> ThroughputEstimate:
    """Raw bits/second and the post-conditioning rate."""
    raw = model.n_cells * model.cycle_hz
    return ThroughputEstimate(raw_bps=raw, conditioned_bps=raw / model.conditioning_factor)


@dataclass(frozen=True)
class EnergyModel:
    """Per-bit energy accounting with a CSPRNG cost band for comparison."""

    e_device: float = DEFAULT_E_DEVICE
    e_shared: float = DEFAULT_E_SHARED
    csprng_range: tuple = field(default=DEFAULT_CSPRNG_RANGE)

    def __post_init__(self):
        if self.e_device < 0.0 or self.e_shared < 0.0:
            raise ValidationError("energy constants must be nonnegative")
        low, high = self.csprng_range
        if not 0.0 < low <= high:
            raise ValidationError(
                f"csprng_range must satisfy 0 < low <= high, got {self.csprng_range}"
            )


@dataclass
class EnergyEstimate:
    e_bit: float
    csprng_ratio: float
    csprng_ratio_range: tuple


def energy_per_bit(
    model: EnergyModel,
    n_cells: int,
    cycle_hz: float,
    conditioning_factor: float = 1.0,
) -> EnergyEstimate:
    """Joules per conditioned output bit and the advantage over a CSPRNG.

    Peripheral power is amortized over the raw bit rate, then the sum is
    scaled by the conditioning factor because each output bit consumes that
    many raw bits. The headline ratio uses the high end of the CSPRNG band.
    """
    if n_cells < 1:
        raise ValidationError(f"n_cells must be positive, got {n_cells}")
    if cycle_hz <= 0.0:
        raise ValidationError(f"cycle_hz must be positive, got {cycle_hz}")
    if conditioning_factor <= 0.0:
        raise ValidationError(
            f"conditioning_factor must be positive, got {conditioning_factor}"
        )
    e_bit = conditioning_factor * (model.e_device + model.e_shared / (n_cells * cycle_hz))
    low, high = model.csprng_range
    return EnergyEstimate(
        e_bit=e_bit,
        csprng_ratio=high / e_bit,
        csprng_ratio_range=(low / e_bit, high / e_bit),
    )
