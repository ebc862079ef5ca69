"""Deterministic PRNG baselines: a Fibonacci LFSR and Xoroshiro128+.

The LFSR is the resource-matched hardware baseline; Xoroshiro128+ is the
statistically strong (but insecure) software reference. Both emit packed
bitstreams under the shared MTJB convention, MSB-first.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .bitstream import RawBitstream, pack_bits
from .errors import ValidationError

DEFAULT_TAPS = (32, 22, 2, 1)

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class Lfsr32State:
    """Fibonacci LFSR state; the register LSB is the output end.

    Tap numbers name the feedback polynomial exponents, so the output obeys
    bit[i] = XOR of bit[i - t] over the taps. Default taps {32, 22, 2, 1}
    realize the primitive polynomial x^32 + x^22 + x^2 + x + 1 (maximal
    period 2^32 - 1).
    """

    register: int
    taps: tuple = DEFAULT_TAPS
    width: int = 32

    def __post_init__(self):
        if not 1 <= self.width <= 64:
            raise ValidationError(f"LFSR width must be in [1, 64], got {self.width}")
        if not 0 < self.register < (1 << self.width):
            raise ValidationError(
                f"LFSR register must be a nonzero {self.width}-bit value, "
                f"got {self.register}"
            )
        taps = tuple(sorted(set(int(t) for t in self.taps), reverse=True))
        if not taps or any(not 1 <= t <= self.width for t in taps):
            raise ValidationError(f"tap positions must be in [1, {self.width}]")
        object.__setattr__(self, "taps", taps)

    @property
    def tap_mask(self) -> int:
        # tap t reads the stage that leaves the register t-1 shifts after the
        # incoming feedback bit, giving the recurrence lag t exactly
        mask = 0
        for t in self.taps:
            mask |= 1 << (self.width - t)
        return mask


def lfsr32_next(state: Lfsr32State):
    """Advance one step; returns (output bit, new state)."""
    out = state.register & 1
    fb = (state.register & state.tap_mask).bit_count() & 1
    register = (state.register >> 1) | (fb << (state.width - 1))
    return out, Lfsr32State(register, state.taps, state.width)


def lfsr_bits(state: Lfsr32State, n_bits: int):
    """Generate n_bits output bits; returns (uint8 bit array, new state)."""
    if n_bits < 0:
        raise ValidationError("n_bits must be nonnegative")
    bits, register = _kernels.lfsr_fill(
        state.register, state.tap_mask, state.width, n_bits
    )
    return bits, Lfsr32State(register, state.taps, state.width)


def lfsr32_stream(seed: int, n_bits: int, taps: tuple = DEFAULT_TAPS,
                  width: int | None = None) -> RawBitstream:
    """Packed stream from a Fibonacci LFSR seeded with the register value.

    The register width defaults to the largest tap (the feedback polynomial
    degree); a wider register would strand seeds outside the tap span in a
    dead zero state.
    """
    if width is None:
        width = max(taps) if taps else 0
    state = Lfsr32State(seed, taps, width)
    bits, _ = lfsr_bits(state, n_bits)
    return RawBitstream(
        data=pack_bits(bits),
        n_bits=n_bits,
        source="lfsr32",
        n_devices=1,
        master_seed=seed,
    )


def _splitmix64(x: int):
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31), x


@dataclass(frozen=True)
class Xoroshiro128pState:
    s0: int
    s1: int

    def __post_init__(self):
        for name in ("s0", "s1"):
            v = getattr(self, name)
            if not 0 <= v <= _MASK64:
                raise ValidationError(f"{name} must be a 64-bit integer, got {v}")
        if self.s0 == 0 and self.s1 == 0:
            raise ValidationError("Xoroshiro128+ state must not be all zero")

    @classmethod
    def from_seed(cls, seed: int) -> "Xoroshiro128pState":
        """Expand a 64-bit seed into a full state via SplitMix64."""
        s0, carry = _splitmix64(seed & _MASK64)
        s1, _ = _splitmix64(carry)
        return cls(s0, s1)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


def xoroshiro128p_next(state: Xoroshiro128pState):
    """Advance one step; returns (64-bit output word, new state)."""
    s0, s1 = state.s0, state.s1
    result = (s0 + s1) & _MASK64
    s1 ^= s0
    s0 = _rotl(s0, 24) ^ s1 ^ ((s1 << 16) & _MASK64)
    s1 = _rotl(s1, 37)
    return result, Xoroshiro128pState(s0, s1)


def xoroshiro_words(state: Xoroshiro128pState, n_words: int):
    """Generate n_words output words; returns (uint64 array, new state)."""
    if n_words < 0:
        raise ValidationError("n_words must be nonnegative")
    words, s0, s1 = _kernels.xoroshiro_fill(state.s0, state.s1, n_words)
    return words, Xoroshiro128pState(s0, s1)


def xoroshiro128p_stream(seed: int, n_bits: int) -> RawBitstream:
    """Packed stream from Xoroshiro128+, each output word taken MSB-first."""
    state = Xoroshiro128pState.from_seed(seed)
    n_words = (n_bits + 63) // 64
    words, _ = xoroshiro_words(state, n_words)
    data = words.astype(">u8").tobytes()[: (n_bits + 7) // 8]
    buf = bytearray(data)
    if n_bits & 7:
        buf[-1] &= (0xFF << (8 - (n_bits & 7))) & 0xFF
    return RawBitstream(
        data=bytes(buf),
        n_bits=n_bits,
        source="xoroshiro128p",
        n_devices=1,
        master_seed=seed & _MASK64,
    )
