# cython: language_level=3
"""Compiled kernels for the bit-serial hot loops.

Mirrors ``_pykernels``: LFSR/Xoroshiro stream fills, Berlekamp-Massey linear
complexity, and batched 32x32 GF(2) rank.
"""

import numpy as np

cimport numpy as cnp
from libc.stdint cimport int32_t, uint8_t, uint32_t, uint64_t

cnp.import_array()

cdef extern from *:
    """
    #if defined(_MSC_VER)
    #include <intrin.h>
    #define MTJ_POPCNT64(x) ((int)__popcnt64(x))
    #else
    #define MTJ_POPCNT64(x) __builtin_popcountll(x)
    #endif
    """
    int MTJ_POPCNT64(uint64_t x) nogil

IMPL = "compiled"


def lfsr_fill(object register, object tap_mask, int width, Py_ssize_t n_bits):
    """Emit n_bits Fibonacci-LFSR output bits; returns (bits, final register)."""
    cdef uint64_t reg = <uint64_t> register
    cdef uint64_t mask = <uint64_t> tap_mask
    cdef uint64_t fb
    cdef Py_ssize_t k
    out = np.empty(n_bits, dtype=np.uint8)
    cdef uint8_t[::1] bits = out
    with nogil:
        for k in range(n_bits):
            bits[k] = <uint8_t> (reg & 1)
            fb = <uint64_t> (MTJ_POPCNT64(reg & mask) & 1)
            reg = (reg >> 1) | (fb << (width - 1))
    return out, int(reg)


def xoroshiro_fill(object s0_in, object s1_in, Py_ssize_t n_words):
    """Generate n_words Xoroshiro128+ outputs; returns (words, s0, s1)."""
    cdef uint64_t s0 = <uint64_t> s0_in
    cdef uint64_t s1 = <uint64_t> s1_in
    cdef Py_ssize_t i
    out = np.empty(n_words, dtype=np.uint64)
    cdef uint64_t[::1] words = out
    with nogil:
        for i in range(n_words):
            words[i] = s0 + s1
            s1 ^= s0
            s0 = (((s0 << 24) | (s0 >> 40))) ^ s1 ^ (s1 << 16)
            s1 = (s1 << 37) | (s1 >> 27)
    return out, int(s0), int(s1)


cdef Py_ssize_t _bm_core(const uint8_t* bits, Py_ssize_t n,
                         uint64_t* c, uint64_t* b, uint64_t* srev,
                         uint64_t* tmp, Py_ssize_t nwords) nogil:
    # srev bit j = s[i - j]; shifting left once per step keeps the
    # discrepancy a plain AND-popcount against the connection polynomial.
    cdef Py_ssize_t L = 0, m = -1, i, w, hi, wo, bo
    cdef int d
    cdef uint64_t carry, nxt
    for w in range(nwords):
        c[w] = 0
        b[w] = 0
        srev[w] = 0
    c[0] = 1
    b[0] = 1
    for i in range(n):
        hi = (i >> 6) + 1
        carry = <uint64_t> bits[i]
        for w in range(hi):
            nxt = srev[w] >> 63
            srev[w] = (srev[w] << 1) | carry
            carry = nxt
        d = 0
        for w in range(hi):
            d ^= MTJ_POPCNT64(c[w] & srev[w])
        if d & 1:
            wo = (i - m) >> 6
            bo = (i - m) & 63
            if 2 * L <= i:
                for w in range(nwords):
                    tmp[w] = c[w]
                _xor_shifted(c, b, nwords, wo, bo)
                for w in range(nwords):
                    b[w] = tmp[w]
                L = i + 1 - L
                m = i
            else:
                _xor_shifted(c, b, nwords, wo, bo)
    return L


cdef inline void _xor_shifted(uint64_t* dst, const uint64_t* src,
                              Py_ssize_t nwords, Py_ssize_t wo,
                              Py_ssize_t bo) nogil:
    cdef Py_ssize_t w
    if bo == 0:
        for w in range(nwords - 1, wo - 1, -1):
            dst[w] ^= src[w - wo]
    else:
        for w in range(nwords - 1, wo, -1):
            dst[w] ^= (src[w - wo] << bo) | (src[w - wo - 1] >> (64 - bo))
        dst[wo] ^= src[0] << bo


def berlekamp_massey(object bits_in):
    """Length of the shortest LFSR generating the bit sequence."""
    cdef cnp.ndarray arr = np.ascontiguousarray(bits_in, dtype=np.uint8)
    cdef const uint8_t[::1] bits = arr
    cdef Py_ssize_t n = bits.shape[0]
    if n == 0:
        return 0
    cdef Py_ssize_t nwords = (n + 63) // 64 + 1
    scratch = np.zeros(4 * nwords, dtype=np.uint64)
    cdef uint64_t[::1] s = scratch
    cdef Py_ssize_t L
    with nogil:
        L = _bm_core(&bits[0], n, &s[0], &s[nwords], &s[2 * nwords],
                     &s[3 * nwords], nwords)
    return int(L)


def linear_complexity_blocks(object bits_in, Py_ssize_t block_len):
    """Berlekamp-Massey complexity of each disjoint block_len-bit block."""
    cdef cnp.ndarray arr = np.ascontiguousarray(bits_in, dtype=np.uint8)
    cdef const uint8_t[::1] bits = arr
    cdef Py_ssize_t n_blocks = bits.shape[0] // block_len
    out = np.empty(n_blocks, dtype=np.int32)
    cdef int32_t[::1] lc = out
    cdef Py_ssize_t nwords = (block_len + 63) // 64 + 1
    scratch = np.zeros(4 * nwords, dtype=np.uint64)
    cdef uint64_t[::1] s = scratch
    cdef Py_ssize_t k
    if n_blocks == 0:
        return out
    with nogil:
        for k in range(n_blocks):
            lc[k] = <int32_t> _bm_core(&bits[k * block_len], block_len,
                                       &s[0], &s[nwords], &s[2 * nwords],
                                       &s[3 * nwords], nwords)
    return out


def rank32_batch(object rows_in):
    """Rank of each 32x32 binary matrix, rows bit-packed into uint32."""
    cdef cnp.ndarray arr = np.ascontiguousarray(rows_in, dtype=np.uint32)
    if arr.ndim != 2 or arr.shape[1] != 32:
        raise ValueError("expected shape (n_matrices, 32)")
    cdef uint32_t[:, ::1] rows = arr.copy()
    cdef Py_ssize_t n_mat = rows.shape[0]
    out = np.empty(n_mat, dtype=np.int32)
    cdef int32_t[::1] ranks = out
    cdef Py_ssize_t k, r, rr
    cdef int col, rank
    cdef uint32_t bit, pv, tmp
    with nogil:
        for k in range(n_mat):
            rank = 0
            for col in range(32):
                bit = (<uint32_t> 1) << (31 - col)
                pv = 0
                for r in range(rank, 32):
                    if rows[k, r] & bit:
                        tmp = rows[k, rank]
                        rows[k, rank] = rows[k, r]
                        rows[k, r] = tmp
                        pv = rows[k, rank]
                        break
                if pv:
                    for rr in range(32):
                        if rr != rank and (rows[k, rr] & bit):
                            rows[k, rr] ^= pv
                    rank += 1
            ranks[k] = rank
    return out
