"""The fifteen SP 800-22 randomness tests over unpacked bit arrays.

Every function takes a uint8 0/1 array plus the suite configuration and
returns a fixed-length list of p-values; ``None`` marks a sub-test that is
not applicable to the sequence (too short, or too few random-walk cycles).
All counting paths are vectorized; the bit-serial kernels (linear
complexity, matrix rank) come from the compiled core with a pure fallback.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.stats import norm

from .. import _kernels
from .special import erfc, igamc
from .templates import generate_aperiodic_templates, load_templates_m9

_LN2 = math.log(2.0)

# Mean of log2(distance-to-previous-occurrence) and its variance for the
# universal test, indexed by block length L (values from the test's
# reference distribution; validated numerically in the test suite).
UNIVERSAL_EXPECTED = {
    6: 5.2177052, 7: 6.1962507, 8: 7.1836656, 9: 8.1764248, 10: 9.1723243,
    11: 10.170032, 12: 11.168765, 13: 12.168070, 14: 13.167693,
    15: 14.167488, 16: 15.167379,
}
UNIVERSAL_VARIANCE = {
    6: 2.954, 7: 3.125, 8: 3.238, 9: 3.311, 10: 3.356,
    11: 3.384, 12: 3.401, 13: 3.410, 14: 3.416, 15: 3.419, 16: 3.421,
}

# Probability that a 1032-bit block contains 0,1,...,>=5 overlapping
# occurrences of the all-ones 9-bit template.
OVERLAPPING_PI = (0.364091, 0.185659, 0.139381, 0.100571, 0.070432, 0.139865)

LINEAR_COMPLEXITY_PI = (
    1 / 96, 1 / 32, 1 / 8, 1 / 2, 1 / 4, 1 / 16, 1 / 48,
)

EXCURSION_STATES = (-4, -3, -2, -1, 1, 2, 3, 4)
VARIANT_STATES = tuple(x for x in range(-9, 10) if x != 0)


def frequency(bits, cfg):
    n = bits.size
    s = 2.0 * int(np.count_nonzero(bits)) - n
    return [float(erfc(abs(s) / math.sqrt(2.0 * n)))]


def block_frequency(bits, cfg):
    m = cfg.block_frequency_m
    n_blocks = bits.size // m
    if n_blocks < 1:
        return [None]
    pi = bits[: n_blocks * m].reshape(n_blocks, m).mean(axis=1)
    chi2 = 4.0 * m * float(np.sum((pi - 0.5) ** 2))
    return [float(igamc(n_blocks / 2.0, chi2 / 2.0))]


def runs(bits, cfg):
    n = bits.size
    pi = float(np.count_nonzero(bits)) / n
    if abs(pi - 0.5) >= 2.0 / math.sqrt(n):
        return [0.0]
    v = 1 + int(np.count_nonzero(bits[1:] != bits[:-1]))
    num = abs(v - 2.0 * n * pi * (1.0 - pi))
    den = 2.0 * math.sqrt(2.0 * n) * pi * (1.0 - pi)
    return [float(erfc(num / den))]


@lru_cache(maxsize=None)
def _prob_longest_run_le(m_block: int, cap: int) -> float:
    """P(longest run of ones in m_block fair bits <= cap), exact."""
    if cap < 0:
        return 0.0
    state = [1] + [0] * cap          # trailing-ones run length 0..cap
    for _ in range(m_block):
        total = sum(state)
        nxt = [total] + state[:cap]  # append 0 -> run 0; append 1 -> run+1
        state = nxt
    return float(Fraction(sum(state), 2 ** m_block))


@lru_cache(maxsize=None)
def longest_run_probabilities(m_block: int, classes: tuple) -> tuple:
    """Class probabilities for {<=v0, v0+1, ..., >=vK} longest-run bins."""
    pis = []
    for i, v in enumerate(classes):
        if i == 0:
            pis.append(_prob_longest_run_le(m_block, v))
        elif i == len(classes) - 1:
            pis.append(1.0 - _prob_longest_run_le(m_block, v - 1))
        else:
            pis.append(
                _prob_longest_run_le(m_block, v)
                - _prob_longest_run_le(m_block, v - 1)
            )
    return tuple(pis)


def _longest_run_params(n: int):
    if n < 128:
        return None
    if n < 6272:
        return 8, (1, 2, 3, 4)
    if n < 750000:
        return 128, (4, 5, 6, 7, 8, 9)
    return 10000, (10, 11, 12, 13, 14, 15, 16)


def longest_run(bits, cfg):
    params = _longest_run_params(bits.size)
    if params is None:
        return [None]
    m_block, classes = params
    n_blocks = bits.size // m_block
    # A zero column between blocks lets one flat pass find every run of
    # ones without crossing block boundaries.
    padded = np.zeros((n_blocks, m_block + 1), dtype=np.int8)
    padded[:, :m_block] = bits[: n_blocks * m_block].reshape(n_blocks, m_block)
    flat = np.concatenate(([0], padded.reshape(-1), [0])).astype(np.int8)
    d = np.diff(flat)
    starts = np.flatnonzero(d == 1)
    ends = np.flatnonzero(d == -1)
    longest = np.zeros(n_blocks, dtype=np.int64)
    if starts.size:
        lengths = ends - starts
        block_ids = starts // (m_block + 1)
        np.maximum.at(longest, block_ids, lengths)
    lo, hi = classes[0], classes[-1]
    binned = np.clip(longest, lo, hi) - lo
    nu = np.bincount(binned, minlength=len(classes))
    pis = np.array(longest_run_probabilities(m_block, classes))
    expected = n_blocks * pis
    chi2 = float(np.sum((nu - expected) ** 2 / expected))
    return [float(igamc((len(classes) - 1) / 2.0, chi2 / 2.0))]


@lru_cache(maxsize=None)
def rank_probabilities(size: int = 32) -> tuple:
    """(P(full rank), P(rank = size-1), remainder) for a random GF(2) matrix."""

    def p_rank(r: int) -> float:
        log2p = r * (2 * size - r) - size * size
        prod = 1.0
        for i in range(r):
            prod *= (1.0 - 2.0 ** (i - size)) ** 2 / (1.0 - 2.0 ** (i - r))
        return 2.0 ** log2p * prod

    p_full = p_rank(size)
    p_minus1 = p_rank(size - 1)
    return p_full, p_minus1, 1.0 - p_full - p_minus1


def matrix_rank_gf2(matrix) -> int:
    """Rank of one square binary matrix over GF(2)."""
    mat = np.asarray(matrix, dtype=np.uint8)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] != 32:
        # General-size fallback via elimination on Python ints.
        rows = [int("".join(str(int(b)) for b in row), 2) if row.size else 0
                for row in mat]
        rank = 0
        width = mat.shape[1] if mat.ndim == 2 else 0
        for col in range(width):
            bit = 1 << (width - 1 - col)
            pivot = next((i for i in range(rank, len(rows)) if rows[i] & bit), None)
            if pivot is None:
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            for i in range(len(rows)):
                if i != rank and rows[i] & bit:
                    rows[i] ^= rows[rank]
            rank += 1
        return rank
    packed = np.packbits(mat, axis=1, bitorder="big")
    words = packed.view(">u4").astype(np.uint32).reshape(1, 32)
    return int(_kernels.rank32_batch(words)[0])


def rank(bits, cfg):
    n_mat = bits.size // 1024
    if n_mat < 1:
        return [None]
    mats = bits[: n_mat * 1024].reshape(n_mat, 32, 32)
    packed = np.packbits(mats, axis=2, bitorder="big")
    words = packed.reshape(n_mat, 32, 4).view(">u4").astype(np.uint32)
    ranks = _kernels.rank32_batch(words.reshape(n_mat, 32))
    f_full = int(np.count_nonzero(ranks == 32))
    f_minus1 = int(np.count_nonzero(ranks == 31))
    f_rest = n_mat - f_full - f_minus1
    pis = rank_probabilities(32)
    counts = (f_full, f_minus1, f_rest)
    chi2 = sum((c - n_mat * p) ** 2 / (n_mat * p) for c, p in zip(counts, pis))
    return [float(igamc(1.0, chi2 / 2.0))]


def spectral_fft(bits, cfg):
    n = bits.size
    if n < 2:
        return [None]
    x = 2.0 * bits.astype(np.float64) - 1.0
    mod = np.abs(np.fft.rfft(x))[: n // 2]
    threshold = math.sqrt(n * math.log(1.0 / 0.05))
    n0 = 0.95 * n / 2.0
    n1 = int(np.count_nonzero(mod < threshold))
    d = (n1 - n0) / math.sqrt(n * 0.95 * 0.05 / 4.0)
    return [float(erfc(abs(d) / math.sqrt(2.0)))]


def _sliding_words(rows: np.ndarray, width: int) -> np.ndarray:
    """Values of every width-bit window along the last axis."""
    n_win = rows.shape[-1] - width + 1
    vals = np.zeros(rows.shape[:-1] + (n_win,), dtype=np.int64)
    for j in range(width):
        vals = (vals << 1) | rows[..., j:j + n_win]
    return vals


def nonoverlapping_template(bits, cfg):
    m = cfg.nonoverlapping_m
    if m == 9:
        templates = load_templates_m9()
    else:
        templates = generate_aperiodic_templates(m)
    n_blocks = 8
    n_subtests = templates.shape[0]
    block_len = bits.size // n_blocks
    if block_len < 2 * m:
        return [None] * n_subtests
    blocks = bits[: n_blocks * block_len].reshape(n_blocks, block_len)
    words = _sliding_words(blocks, m)
    counts = np.zeros((n_blocks, 1 << m), dtype=np.int64)
    for b in range(n_blocks):
        counts[b] = np.bincount(words[b], minlength=1 << m)
    # Aperiodic templates cannot overlap themselves, so the plain sliding
    # count equals the standard's skip-ahead occurrence count.
    tvals = _sliding_words(templates, m).reshape(-1)
    occur = counts[:, tvals]
    mu = (block_len - m + 1) / 2.0 ** m
    var = block_len * (1.0 / 2 ** m - (2.0 * m - 1.0) / 2.0 ** (2 * m))
    chi2 = ((occur - mu) ** 2).sum(axis=0) / var
    return [float(p) for p in igamc(n_blocks / 2.0, chi2 / 2.0)]


def overlapping_template(bits, cfg):
    m = cfg.overlapping_m
    block_len = 1032
    n_blocks = bits.size // block_len
    if n_blocks < 1:
        return [None]
    blocks = bits[: n_blocks * block_len].reshape(n_blocks, block_len)
    csum = np.zeros((n_blocks, block_len + 1), dtype=np.int64)
    np.cumsum(blocks, axis=1, out=csum[:, 1:])
    window = csum[:, m:] - csum[:, :-m]
    occur = (window == m).sum(axis=1)
    nu = np.bincount(np.minimum(occur, 5), minlength=6)
    pis = np.array(OVERLAPPING_PI)
    expected = n_blocks * pis
    chi2 = float(np.sum((nu - expected) ** 2 / expected))
    return [float(igamc(5 / 2.0, chi2 / 2.0))]


def universal(bits, cfg):
    big_l = cfg.universal_l
    q = cfg.universal_q
    if big_l not in UNIVERSAL_EXPECTED or bits.size < 387840:
        return [None]
    n_blocks = bits.size // big_l
    k = n_blocks - q
    if q < 10 * (1 << big_l) or k < 1000:
        return [None]
    words = _sliding_words(
        bits[: n_blocks * big_l].reshape(n_blocks, big_l), big_l
    ).reshape(-1)
    # Previous-occurrence positions via one stable sort: inside each run of
    # equal values the predecessor is the previous occurrence.
    order = np.argsort(words, kind="stable")
    sorted_words = words[order]
    prev = np.zeros(n_blocks, dtype=np.int64)      # 1-based, 0 = unseen
    same = np.flatnonzero(sorted_words[1:] == sorted_words[:-1]) + 1
    prev[order[same]] = order[same - 1] + 1
    pos = np.arange(1, n_blocks + 1, dtype=np.int64)
    distances = (pos - prev)[q:]
    fn = float(np.sum(np.log2(distances.astype(np.float64))))
    phi = fn / k
    c = 0.7 - 0.8 / big_l + (4.0 + 32.0 / big_l) * k ** (-3.0 / big_l) / 15.0
    sigma = c * math.sqrt(UNIVERSAL_VARIANCE[big_l] / k)
    stat = abs(phi - UNIVERSAL_EXPECTED[big_l]) / (math.sqrt(2.0) * sigma)
    return [float(erfc(stat))]


def linear_complexity(bits, cfg):
    m = cfg.linear_complexity_m
    n_blocks = bits.size // m
    if n_blocks < 1:
        return [None]
    lc = _kernels.linear_complexity_blocks(bits[: n_blocks * m], m)
    mu = m / 2.0 + (9.0 + (-1.0) ** (m + 1)) / 36.0 - (m / 3.0 + 2.0 / 9.0) / 2.0 ** m
    t = (-1.0) ** m * (lc.astype(np.float64) - mu) + 2.0 / 9.0
    edges = np.array([-2.5, -1.5, -0.5, 0.5, 1.5, 2.5])
    nu = np.bincount(np.digitize(t, edges, right=True), minlength=7)
    pis = np.array(LINEAR_COMPLEXITY_PI)
    expected = n_blocks * pis
    chi2 = float(np.sum((nu - expected) ** 2 / expected))
    return [float(igamc(3.0, chi2 / 2.0))]


def _psi_sq(bits, m: int) -> float:
    """Psi-square statistic over circular m-bit windows."""
    if m == 0:
        return 0.0
    n = bits.size
    ext = np.concatenate([bits, bits[: m - 1]]) if m > 1 else bits
    words = _sliding_words(ext[np.newaxis, :], m).reshape(-1)[:n]
    counts = np.bincount(words, minlength=1 << m).astype(np.float64)
    return float(2.0 ** m / n * np.dot(counts, counts) - n)


def serial(bits, cfg):
    m = cfg.serial_m
    if bits.size < (1 << (m + 2)):
        return [None, None]
    psi_m = _psi_sq(bits, m)
    psi_m1 = _psi_sq(bits, m - 1)
    psi_m2 = _psi_sq(bits, m - 2)
    d1 = psi_m - psi_m1
    d2 = psi_m - 2.0 * psi_m1 + psi_m2
    p1 = float(igamc(2.0 ** (m - 2), d1 / 2.0))
    p2 = float(igamc(2.0 ** (m - 3), d2 / 2.0))
    return [p1, p2]


def approximate_entropy(bits, cfg):
    m = cfg.approx_entropy_m
    n = bits.size
    if n < (1 << (m + 3)):
        return [None]

    def phi(block: int) -> float:
        ext = np.concatenate([bits, bits[: block - 1]]) if block > 1 else bits
        words = _sliding_words(ext[np.newaxis, :], block).reshape(-1)[:n]
        counts = np.bincount(words, minlength=1 << block).astype(np.float64)
        probs = counts[counts > 0] / n
        return float(np.sum(probs * np.log(probs)))

    apen = phi(m) - phi(m + 1)
    chi2 = 2.0 * n * (_LN2 - apen)
    return [float(igamc(2.0 ** (m - 1), chi2 / 2.0))]


def _cusum_pvalue(z: int, n: int) -> float:
    sqrt_n = math.sqrt(n)
    k_lo = (-n / z + 1) // 4
    k_hi = (n / z - 1) // 4
    ks = np.arange(k_lo, k_hi + 1, dtype=np.float64)
    term1 = np.sum(
        norm.cdf((4 * ks + 1) * z / sqrt_n) - norm.cdf((4 * ks - 1) * z / sqrt_n)
    )
    k_lo2 = (-n / z - 3) // 4
    ks2 = np.arange(k_lo2, k_hi + 1, dtype=np.float64)
    term2 = np.sum(
        norm.cdf((4 * ks2 + 3) * z / sqrt_n) - norm.cdf((4 * ks2 + 1) * z / sqrt_n)
    )
    return float(1.0 - term1 + term2)


def cumulative_sums(bits, cfg):
    x = 2 * bits.astype(np.int64) - 1
    n = bits.size
    fwd = np.cumsum(x)
    z_fwd = int(np.max(np.abs(fwd)))
    z_bwd = int(np.max(np.abs(np.cumsum(x[::-1]))))
    return [_cusum_pvalue(z_fwd, n), _cusum_pvalue(z_bwd, n)]


def _walk_cycles(bits):
    s = np.cumsum(2 * bits.astype(np.int64) - 1)
    zero_pos = np.flatnonzero(s == 0)
    n_cycles = zero_pos.size + (1 if s[-1] != 0 else 0)
    return s, zero_pos, n_cycles


def random_excursions(bits, cfg):
    s, zero_pos, j_cycles = _walk_cycles(bits)
    if j_cycles < 500:
        return [None] * len(EXCURSION_STATES)
    pvals = []
    for x in EXCURSION_STATES:
        visit_pos = np.flatnonzero(s == x)
        cycle_ids = np.searchsorted(zero_pos, visit_pos, side="left")
        per_cycle = np.bincount(cycle_ids, minlength=j_cycles)
        nu = np.bincount(np.minimum(per_cycle, 5), minlength=6)
        ax = abs(x)
        p0 = 1.0 - 1.0 / (2.0 * ax)
        pis = [p0]
        for k in range(1, 5):
            pis.append(1.0 / (4.0 * x * x) * p0 ** (k - 1))
        pis.append(1.0 / (2.0 * ax) * p0 ** 4)
        expected = j_cycles * np.array(pis)
        chi2 = float(np.sum((nu - expected) ** 2 / expected))
        pvals.append(float(igamc(5 / 2.0, chi2 / 2.0)))
    return pvals


def random_excursions_variant(bits, cfg):
    s, _, j_cycles = _walk_cycles(bits)
    if j_cycles < 500:
        return [None] * len(VARIANT_STATES)
    pvals = []
    for x in VARIANT_STATES:
        xi = int(np.count_nonzero(s == x))
        denom = math.sqrt(2.0 * j_cycles * (4.0 * abs(x) - 2.0))
        pvals.append(float(erfc(abs(xi - j_cycles) / denom)))
    return pvals
