"""Pure Python/numpy fallbacks for the compiled kernel core.

Same signatures as ``_ckernels``; correctness-identical, just slower on the
bit-serial loops. The LFSR fill uses 16-bit half-state lookup tables so the
fallback stays usable for multi-megabit streams.
"""

from __future__ import annotations

import numpy as np

IMPL = "python"

_MASK64 = (1 << 64) - 1


# ---------------------------------------------------------------------------
# LFSR
# ---------------------------------------------------------------------------

def _lfsr_step(register: int, tap_mask: int, width: int):
    out = register & 1
    fb = (register & tap_mask).bit_count() & 1
    register = (register >> 1) | (fb << (width - 1))
    return out, register


_lfsr_tables: dict = {}


def _lfsr_byte_tables(tap_mask: int, width: int):
    # step8 is GF(2)-linear in the register, so out byte and next state
    # decompose over 16-bit halves of the initial state.
    key = (tap_mask, width)
    if key in _lfsr_tables:
        return _lfsr_tables[key]

    def step8(reg):
        byte = 0
        for i in range(8):
            out, reg = _lfsr_step(reg, tap_mask, width)
            byte |= out << (7 - i)
        return byte, reg

    half = min(16, width)
    n_lo = 1 << half
    n_hi = 1 << max(0, width - half)
    out_lo = np.empty(n_lo, dtype=np.uint64)
    new_lo = np.empty(n_lo, dtype=np.uint64)
    for v in range(n_lo):
        b, r = step8(v)
        out_lo[v], new_lo[v] = b, r
    out_hi = np.empty(n_hi, dtype=np.uint64)
    new_hi = np.empty(n_hi, dtype=np.uint64)
    for v in range(n_hi):
        b, r = step8(v << half)
        out_hi[v], new_hi[v] = b, r
    tables = (half, out_lo, new_lo, out_hi, new_hi)
    _lfsr_tables[key] = tables
    return tables


def lfsr_fill(register: int, tap_mask: int, width: int, n_bits: int):
    """Emit n_bits Fibonacci-LFSR output bits; returns (bits, final register)."""
    bits = np.empty(n_bits, dtype=np.uint8)
    filled = 0
    n_bytes = n_bits // 8
    # table setup costs 96k steps, so only amortize it over long fills; wide
    # registers would need oversized half tables and take the plain loop
    if n_bytes >= 64 and width <= 32:
        half, out_lo, new_lo, out_hi, new_hi = _lfsr_byte_tables(tap_mask, width)
        mask = (1 << half) - 1
        out = bytearray(n_bytes)
        ol, nl, oh, nh = out_lo.tolist(), new_lo.tolist(), out_hi.tolist(), new_hi.tolist()
        reg = register
        for i in range(n_bytes):
            lo = reg & mask
            hi = reg >> half
            out[i] = ol[lo] ^ oh[hi]
            reg = nl[lo] ^ nh[hi]
        register = reg
        filled = 8 * n_bytes
        bits[:filled] = np.unpackbits(
            np.frombuffer(bytes(out), dtype=np.uint8), bitorder="big"
        )
    for k in range(filled, n_bits):
        bits[k], register = _lfsr_step(register, tap_mask, width)
    return bits, register


# ---------------------------------------------------------------------------
# Xoroshiro128+
# ---------------------------------------------------------------------------

def xoroshiro_fill(s0: int, s1: int, n_words: int):
    """Generate n_words Xoroshiro128+ outputs; returns (words, s0, s1)."""
    words = np.empty(n_words, dtype=np.uint64)
    for i in range(n_words):
        words[i] = (s0 + s1) & _MASK64
        s1 ^= s0
        s0 = (((s0 << 24) | (s0 >> 40)) & _MASK64) ^ s1 ^ ((s1 << 16) & _MASK64)
        s1 = ((s1 << 37) | (s1 >> 27)) & _MASK64
    return words, s0, s1


# ---------------------------------------------------------------------------
# Berlekamp-Massey over GF(2)
# ---------------------------------------------------------------------------

def berlekamp_massey(bits: np.ndarray) -> int:
    """Length of the shortest LFSR generating the bit sequence."""
    bits = np.asarray(bits, dtype=np.uint8)
    n = bits.size
    c = b = 1          # connection polynomials, bit j = coefficient of x^j
    L = 0
    m = -1
    srev = 0           # bit j holds s[i - j] after the shift below
    blist = bits.tolist()
    for i in range(n):
        srev = (srev << 1) | blist[i]
        d = (c & srev).bit_count() & 1
        if d:
            t = c
            c ^= b << (i - m)
            if 2 * L <= i:
                L = i + 1 - L
                m = i
                b = t
    return L


def linear_complexity_blocks(bits: np.ndarray, block_len: int) -> np.ndarray:
    """Berlekamp-Massey complexity of each disjoint block_len-bit block."""
    bits = np.asarray(bits, dtype=np.uint8)
    n_blocks = bits.size // block_len
    out = np.empty(n_blocks, dtype=np.int32)
    for k in range(n_blocks):
        out[k] = berlekamp_massey(bits[k * block_len:(k + 1) * block_len])
    return out


# ---------------------------------------------------------------------------
# Batched 32x32 GF(2) rank
# ---------------------------------------------------------------------------

def rank32_batch(rows: np.ndarray) -> np.ndarray:
    """Rank of each 32x32 binary matrix, rows bit-packed into uint32.

    rows has shape (n_matrices, 32); elimination runs vectorized across the
    whole batch, one pivot column at a time.
    """
    work = np.ascontiguousarray(rows, dtype=np.uint32).copy()
    n_mat = work.shape[0]
    idx = np.arange(n_mat)
    row_pos = np.arange(32)
    pivot = np.zeros(n_mat, dtype=np.int64)
    for col in range(32):
        bit = np.uint32(1 << (31 - col))
        has = (work & bit) != 0                      # (n_mat, 32)
        eligible = has & (row_pos >= pivot[:, None])
        any_el = eligible.any(axis=1)
        first = eligible.argmax(axis=1)
        sel = idx[any_el]
        if sel.size:
            pr = pivot[any_el]
            fr = first[any_el]
            # swap pivot row into place
            tmp = work[sel, pr].copy()
            work[sel, pr] = work[sel, fr]
            work[sel, fr] = tmp
            # eliminate the column from every other row carrying the bit
            pv = work[sel, pr]
            has_now = (work[sel] & bit) != 0
            has_now[np.arange(sel.size), pr] = False
            work[sel] ^= has_now * pv[:, None]
            pivot[any_el] += 1
    return pivot.astype(np.int32)
