"""Per-test validation of the fifteen randomness tests.

Each vectorized production test is checked against a deliberately plain
reference implementation (python loops, string scanning, big-int algebra,
mpmath for the gamma tail) on seeded random sequences, plus worked examples
and exact distribution tables validated by enumeration.
"""

import math
from collections import Counter

import mpmath
import numpy as np
import pytest

from mtjrng.nist import randtests
from mtjrng.nist.randtests import (
    EXCURSION_STATES,
    LINEAR_COMPLEXITY_PI,
    OVERLAPPING_PI,
    UNIVERSAL_EXPECTED,
    UNIVERSAL_VARIANCE,
    VARIANT_STATES,
    _prob_longest_run_le,
    longest_run_probabilities,
    matrix_rank_gf2,
    rank_probabilities,
)
from mtjrng.nist.suite import TEST_ORDER, SuiteConfig, run_single_test
from mtjrng.nist.templates import load_templates_m9

mpmath.mp.dps = 25


def _bits(text: str) -> np.ndarray:
    return np.array([int(c) for c in text], dtype=np.uint8)


def _ref_igamc(a: float, x: float) -> float:
    return float(mpmath.gammainc(a, x, mpmath.inf, regularized=True))


def _phi(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


@pytest.fixture(scope="module")
def seq_1m():
    rng = np.random.default_rng(20260815)
    return rng.integers(0, 2, 10**6, dtype=np.uint8)


CFG = SuiteConfig()


# ---------------------------------------------------------------------------
# Worked examples with pinned p-values.


class TestWorkedExamples:
    def test_frequency_ten_bits(self):
        p = run_single_test("frequency", _bits("1011010101"), CFG)
        assert p == [pytest.approx(0.527089, abs=1e-5)]

    def test_runs_ten_bits(self):
        p = run_single_test("runs", _bits("1001101011"), CFG)
        assert p == [pytest.approx(0.147232, abs=1e-5)]

    def test_runs_prerequisite_shortcut(self):
        bits = np.zeros(1000, dtype=np.uint8)
        bits[:700] = 1
        assert run_single_test("runs", bits, CFG) == [0.0]


# ---------------------------------------------------------------------------
# Exact distribution tables.


class TestLongestRunTables:
    def test_m8_table(self):
        pis = longest_run_probabilities(8, (1, 2, 3, 4))
        assert pis == pytest.approx((0.2148, 0.3672, 0.2305, 0.1875), abs=5e-5)

    def test_m8_exact_fractions(self):
        # Strings of 8 fair bits: 55 avoid "11", 149 avoid "111",
        # 208 avoid "1111"; all denominators are powers of two so the
        # float comparisons are exact.
        assert _prob_longest_run_le(8, 1) == 55 / 256
        assert _prob_longest_run_le(8, 2) == 149 / 256
        assert _prob_longest_run_le(8, 3) == 208 / 256

    @pytest.mark.parametrize("m_block", [8, 12])
    def test_matches_enumeration(self, m_block):
        classes = (1, 2, 3, 4) if m_block == 8 else (2, 3, 4, 5, 6)
        hist = [0] * len(classes)
        lo, hi = classes[0], classes[-1]
        for v in range(1 << m_block):
            longest = cur = 0
            for j in range(m_block):
                cur = cur + 1 if (v >> j) & 1 else 0
                longest = max(longest, cur)
            hist[min(max(longest, lo), hi) - lo] += 1
        want = [h / (1 << m_block) for h in hist]
        assert longest_run_probabilities(m_block, classes) == tuple(want)

    def test_classes_sum_to_one(self):
        for m_block, classes in ((8, (1, 2, 3, 4)),
                                 (128, (4, 5, 6, 7, 8, 9)),
                                 (10000, (10, 11, 12, 13, 14, 15, 16))):
            pis = longest_run_probabilities(m_block, classes)
            assert sum(pis) == pytest.approx(1.0, abs=1e-12)


class TestRankProbabilities:
    def test_known_32_values(self):
        p_full, p_m1, p_rest = rank_probabilities(32)
        assert p_full == pytest.approx(0.2888, abs=1e-4)
        assert p_m1 == pytest.approx(0.5776, abs=1e-4)
        assert p_rest == pytest.approx(0.1336, abs=1e-4)

    def test_matches_exhaustive_4x4(self):
        counts = Counter()
        for v in range(1 << 16):
            mat = [[(v >> (4 * i + j)) & 1 for j in range(4)] for i in range(4)]
            counts[matrix_rank_gf2(np.array(mat, dtype=np.uint8))] += 1
        total = 1 << 16
        p_full, p_m1, p_rest = rank_probabilities(4)
        assert p_full == pytest.approx(counts[4] / total, abs=1e-12)
        assert p_m1 == pytest.approx(counts[3] / total, abs=1e-12)
        assert p_rest == pytest.approx(
            (total - counts[4] - counts[3]) / total, abs=1e-12
        )


class TestUniversalTable:
    @pytest.mark.parametrize("big_l", sorted(UNIVERSAL_EXPECTED))
    def test_moments_match_geometric_law(self, big_l):
        # First occurrence distance of an L-bit word is geometric with
        # rate 2^-L; the table holds E[log2 D] and Var[log2 D].
        lam = 2.0 ** -big_l
        n_terms = int(60 / lam)
        i = np.arange(1, n_terms + 1, dtype=np.float64)
        p = np.exp(math.log(lam) + (i - 1.0) * math.log1p(-lam))
        lg = np.log2(i)
        mean = float(np.sum(p * lg))
        var = float(np.sum(p * lg * lg) - mean * mean)
        assert mean == pytest.approx(UNIVERSAL_EXPECTED[big_l], abs=1e-6)
        # The published variances are truncated, not rounded, at three
        # decimals, so allow a full last-digit step.
        assert var == pytest.approx(UNIVERSAL_VARIANCE[big_l], abs=1e-3)


class TestOverlappingPi:
    def test_monte_carlo(self):
        rng = np.random.default_rng(99)
        n_blocks = 60000
        blocks = rng.integers(0, 2, (n_blocks, 1032), dtype=np.uint8)
        csum = np.zeros((n_blocks, 1033), dtype=np.int64)
        np.cumsum(blocks, axis=1, out=csum[:, 1:])
        occ = ((csum[:, 9:] - csum[:, :-9]) == 9).sum(axis=1)
        freq = np.bincount(np.minimum(occ, 5), minlength=6) / n_blocks
        assert np.allclose(freq, OVERLAPPING_PI, atol=0.006)

    def test_sums_to_one(self):
        assert sum(OVERLAPPING_PI) == pytest.approx(1.0, abs=1e-5)


class TestLinearComplexityPi:
    def test_monte_carlo(self):
        from mtjrng import _kernels

        rng = np.random.default_rng(7)
        m = 500
        n_blocks = 2000
        lc = _kernels.linear_complexity_blocks(
            rng.integers(0, 2, m * n_blocks, dtype=np.uint8), m
        )
        mu = m / 2.0 + (9.0 + (-1.0) ** (m + 1)) / 36.0 \
            - (m / 3.0 + 2.0 / 9.0) / 2.0 ** m
        t = (-1.0) ** m * (lc.astype(np.float64) - mu) + 2.0 / 9.0
        edges = np.array([-2.5, -1.5, -0.5, 0.5, 1.5, 2.5])
        nu = np.bincount(np.digitize(t, edges, right=True), minlength=7)
        expected = n_blocks * np.array(LINEAR_COMPLEXITY_PI)
        chi2 = float(np.sum((nu - expected) ** 2 / expected))
        assert chi2 < 30.0

    def test_sums_to_one(self):
        assert sum(LINEAR_COMPLEXITY_PI) == pytest.approx(1.0, abs=1e-12)


class TestExcursionPi:
    def test_visit_distribution_monte_carlo(self):
        # Simulate a long fair walk and compare per-cycle visit counts to
        # the closed-form pi_k(x) used by the test.
        rng = np.random.default_rng(31)
        steps = 2 * rng.integers(0, 2, 10**7, dtype=np.int64) - 1
        s = np.cumsum(steps)
        zero_pos = np.flatnonzero(s == 0)
        j = zero_pos.size + (1 if s[-1] != 0 else 0)
        for x in (1, 2, 3):
            visit_pos = np.flatnonzero(s == x)
            cycle_ids = np.searchsorted(zero_pos, visit_pos, side="left")
            per_cycle = np.bincount(cycle_ids, minlength=j)
            nu = np.bincount(np.minimum(per_cycle, 5), minlength=6) / j
            p0 = 1.0 - 1.0 / (2.0 * x)
            pis = [p0]
            for k in range(1, 5):
                pis.append(p0 ** (k - 1) / (4.0 * x * x))
            pis.append(p0 ** 4 / (2.0 * x))
            assert np.allclose(nu, pis, atol=0.03), x


# ---------------------------------------------------------------------------
# Reference implementations (plain loops, strings, mpmath tails).


def ref_frequency(bits):
    s = sum(2 * int(b) - 1 for b in bits)
    return math.erfc(abs(s) / math.sqrt(2 * len(bits)))


def ref_block_frequency(bits, m):
    n_blocks = len(bits) // m
    chi2 = 0.0
    for b in range(n_blocks):
        pi = sum(int(x) for x in bits[b * m:(b + 1) * m]) / m
        chi2 += 4.0 * m * (pi - 0.5) ** 2
    return _ref_igamc(n_blocks / 2.0, chi2 / 2.0)


def ref_runs(bits):
    n = len(bits)
    pi = sum(int(b) for b in bits) / n
    if abs(pi - 0.5) >= 2.0 / math.sqrt(n):
        return 0.0
    v = 1 + sum(1 for i in range(n - 1) if bits[i] != bits[i + 1])
    return math.erfc(
        abs(v - 2.0 * n * pi * (1 - pi))
        / (2.0 * math.sqrt(2.0 * n) * pi * (1 - pi))
    )


def ref_longest_run(bits):
    n = len(bits)
    if n < 6272:
        m_block, classes = 8, (1, 2, 3, 4)
    elif n < 750000:
        m_block, classes = 128, (4, 5, 6, 7, 8, 9)
    else:
        m_block, classes = 10000, (10, 11, 12, 13, 14, 15, 16)
    n_blocks = n // m_block
    nu = [0] * len(classes)
    lo, hi = classes[0], classes[-1]
    for b in range(n_blocks):
        longest = cur = 0
        for bit in bits[b * m_block:(b + 1) * m_block]:
            cur = cur + 1 if bit else 0
            longest = max(longest, cur)
        nu[min(max(longest, lo), hi) - lo] += 1
    pis = longest_run_probabilities(m_block, classes)
    chi2 = sum(
        (c - n_blocks * p) ** 2 / (n_blocks * p) for c, p in zip(nu, pis)
    )
    return _ref_igamc((len(classes) - 1) / 2.0, chi2 / 2.0)


def _ref_rank_one(rows):
    # Gaussian elimination on 32-bit integer rows, most significant
    # column first.
    rows = list(rows)
    rank = 0
    for col in range(32):
        bit = 1 << (31 - col)
        pivot = next((i for i in range(rank, 32) if rows[i] & bit), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(32):
            if i != rank and rows[i] & bit:
                rows[i] ^= rows[rank]
        rank += 1
    return rank


def ref_rank(bits):
    n_mat = len(bits) // 1024
    counts = Counter()
    for k in range(n_mat):
        block = bits[k * 1024:(k + 1) * 1024]
        rows = [
            int("".join(str(int(b)) for b in block[r * 32:(r + 1) * 32]), 2)
            for r in range(32)
        ]
        counts[_ref_rank_one(rows)] += 1
    pis = rank_probabilities(32)
    obs = (counts[32], counts[31], n_mat - counts[32] - counts[31])
    chi2 = sum((c - n_mat * p) ** 2 / (n_mat * p) for c, p in zip(obs, pis))
    return _ref_igamc(1.0, chi2 / 2.0)


def ref_spectral(bits):
    n = len(bits)
    x = 2.0 * np.asarray(bits, dtype=np.float64) - 1.0
    k = np.arange(n // 2)[:, None]
    j = np.arange(n)[None, :]
    dft = np.exp(-2j * np.pi * k * j / n) @ x
    threshold = math.sqrt(n * math.log(1.0 / 0.05))
    n1 = int(np.count_nonzero(np.abs(dft) < threshold))
    d = (n1 - 0.95 * n / 2.0) / math.sqrt(n * 0.95 * 0.05 / 4.0)
    return math.erfc(abs(d) / math.sqrt(2.0))


def ref_nonoverlapping(bits, templates):
    # The standard's stepping scan: advance one bit on a miss, a full
    # template length on a hit.
    text = "".join(str(int(b)) for b in bits)
    n_blocks = 8
    block_len = len(bits) // n_blocks
    m = templates.shape[1]
    mu = (block_len - m + 1) / 2.0 ** m
    var = block_len * (1.0 / 2 ** m - (2.0 * m - 1.0) / 2.0 ** (2 * m))
    pvals = []
    for row in templates:
        pattern = "".join(str(int(b)) for b in row)
        chi2 = 0.0
        for b in range(n_blocks):
            seg = text[b * block_len:(b + 1) * block_len]
            count = 0
            pos = seg.find(pattern)
            while pos != -1:
                count += 1
                pos = seg.find(pattern, pos + m)
            chi2 += (count - mu) ** 2 / var
        pvals.append(_ref_igamc(n_blocks / 2.0, chi2 / 2.0))
    return pvals


def ref_overlapping(bits, m=9):
    text = "".join(str(int(b)) for b in bits)
    pattern = "1" * m
    block_len = 1032
    n_blocks = len(bits) // block_len
    nu = [0] * 6
    for b in range(n_blocks):
        seg = text[b * block_len:(b + 1) * block_len]
        count = 0
        pos = seg.find(pattern)
        while pos != -1:
            count += 1
            pos = seg.find(pattern, pos + 1)
        nu[min(count, 5)] += 1
    chi2 = sum(
        (c - n_blocks * p) ** 2 / (n_blocks * p)
        for c, p in zip(nu, OVERLAPPING_PI)
    )
    return _ref_igamc(5 / 2.0, chi2 / 2.0)


def ref_universal(bits, big_l=7, q=1280):
    n_blocks = len(bits) // big_l
    k = n_blocks - q
    last = {}
    total = 0.0
    for i in range(n_blocks):
        word = 0
        for b in bits[i * big_l:(i + 1) * big_l]:
            word = (word << 1) | int(b)
        pos = i + 1
        if i < q:
            last[word] = pos
        else:
            total += math.log2(pos - last.get(word, 0))
            last[word] = pos
    phi = total / k
    c = 0.7 - 0.8 / big_l + (4.0 + 32.0 / big_l) * k ** (-3.0 / big_l) / 15.0
    sigma = c * math.sqrt(UNIVERSAL_VARIANCE[big_l] / k)
    stat = abs(phi - UNIVERSAL_EXPECTED[big_l]) / (math.sqrt(2.0) * sigma)
    return math.erfc(stat)


def _ref_berlekamp_massey(seq):
    c = [1] + [0] * len(seq)
    b = [1] + [0] * len(seq)
    l, m = 0, -1
    for n in range(len(seq)):
        d = seq[n]
        for i in range(1, l + 1):
            d ^= c[i] & seq[n - i]
        if d:
            c_prev = c[:]
            shift = n - m
            for i in range(len(b) - shift):
                c[i + shift] ^= b[i]
            if 2 * l <= n:
                l = n + 1 - l
                m = n
                b = c_prev
    return l


def ref_linear_complexity(bits, m=500):
    n_blocks = len(bits) // m
    mu = m / 2.0 + (9.0 + (-1.0) ** (m + 1)) / 36.0 \
        - (m / 3.0 + 2.0 / 9.0) / 2.0 ** m
    nu = [0] * 7
    for b in range(n_blocks):
        lc = _ref_berlekamp_massey([int(x) for x in bits[b * m:(b + 1) * m]])
        t = (-1.0) ** m * (lc - mu) + 2.0 / 9.0
        if t <= -2.5:
            nu[0] += 1
        elif t <= -1.5:
            nu[1] += 1
        elif t <= -0.5:
            nu[2] += 1
        elif t <= 0.5:
            nu[3] += 1
        elif t <= 1.5:
            nu[4] += 1
        elif t <= 2.5:
            nu[5] += 1
        else:
            nu[6] += 1
    chi2 = sum(
        (c - n_blocks * p) ** 2 / (n_blocks * p)
        for c, p in zip(nu, LINEAR_COMPLEXITY_PI)
    )
    return _ref_igamc(3.0, chi2 / 2.0)


def _ref_psi_sq(text, m):
    if m == 0:
        return 0.0
    n = len(text)
    ext = text + text[: m - 1]
    counts = Counter(ext[i:i + m] for i in range(n))
    return 2.0 ** m / n * sum(c * c for c in counts.values()) - n


def ref_serial(bits, m):
    text = "".join(str(int(b)) for b in bits)
    d1 = _ref_psi_sq(text, m) - _ref_psi_sq(text, m - 1)
    d2 = (
        _ref_psi_sq(text, m)
        - 2.0 * _ref_psi_sq(text, m - 1)
        + _ref_psi_sq(text, m - 2)
    )
    return [
        _ref_igamc(2.0 ** (m - 2), d1 / 2.0),
        _ref_igamc(2.0 ** (m - 3), d2 / 2.0),
    ]


def ref_approximate_entropy(bits, m):
    text = "".join(str(int(b)) for b in bits)
    n = len(text)

    def phi(block):
        ext = text + text[: block - 1] if block > 1 else text
        counts = Counter(ext[i:i + block] for i in range(n))
        return sum(c / n * math.log(c / n) for c in counts.values())

    chi2 = 2.0 * n * (math.log(2.0) - (phi(m) - phi(m + 1)))
    return _ref_igamc(2.0 ** (m - 1), chi2 / 2.0)


def _ref_cusum_p(z, n):
    sqrt_n = math.sqrt(n)
    term1 = sum(
        _phi((4 * k + 1) * z / sqrt_n) - _phi((4 * k - 1) * z / sqrt_n)
        for k in range(int((-n / z + 1) // 4), int((n / z - 1) // 4) + 1)
    )
    term2 = sum(
        _phi((4 * k + 3) * z / sqrt_n) - _phi((4 * k + 1) * z / sqrt_n)
        for k in range(int((-n / z - 3) // 4), int((n / z - 1) // 4) + 1)
    )
    return 1.0 - term1 + term2


def ref_cusum(bits):
    x = [2 * int(b) - 1 for b in bits]
    n = len(x)
    s = 0
    z_fwd = 0
    for v in x:
        s += v
        z_fwd = max(z_fwd, abs(s))
    s = 0
    z_bwd = 0
    for v in reversed(x):
        s += v
        z_bwd = max(z_bwd, abs(s))
    return [_ref_cusum_p(z_fwd, n), _ref_cusum_p(z_bwd, n)]


def _ref_cycles(bits):
    walk = []
    s = 0
    for b in bits:
        s += 2 * int(b) - 1
        walk.append(s)
    cycles = []
    cur = []
    for v in walk:
        cur.append(v)
        if v == 0:
            cycles.append(cur)
            cur = []
    if cur:
        cycles.append(cur)
    return walk, cycles


def ref_random_excursions(bits):
    _, cycles = _ref_cycles(bits)
    j = len(cycles)
    if j < 500:
        return [None] * len(EXCURSION_STATES)
    pvals = []
    for x in EXCURSION_STATES:
        nu = [0] * 6
        for cyc in cycles:
            visits = sum(1 for v in cyc if v == x)
            nu[min(visits, 5)] += 1
        ax = abs(x)
        p0 = 1.0 - 1.0 / (2.0 * ax)
        pis = [p0]
        for k in range(1, 5):
            pis.append(p0 ** (k - 1) / (4.0 * x * x))
        pis.append(p0 ** 4 / (2.0 * ax))
        chi2 = sum((c - j * p) ** 2 / (j * p) for c, p in zip(nu, pis))
        pvals.append(_ref_igamc(5 / 2.0, chi2 / 2.0))
    return pvals


def ref_random_excursions_variant(bits):
    walk, cycles = _ref_cycles(bits)
    j = len(cycles)
    if j < 500:
        return [None] * len(VARIANT_STATES)
    hist = Counter(walk)
    return [
        math.erfc(abs(hist[x] - j) / math.sqrt(2.0 * j * (4.0 * abs(x) - 2.0)))
        for x in VARIANT_STATES
    ]


# ---------------------------------------------------------------------------
# Production vs reference on seeded random data.


class TestAgainstReference:
    def test_frequency(self, seq_1m):
        got = run_single_test("frequency", seq_1m, CFG)
        assert got == [pytest.approx(ref_frequency(seq_1m), abs=1e-10)]

    def test_block_frequency(self, seq_1m):
        got = run_single_test("block_frequency", seq_1m[:10**5], CFG)
        assert got == [
            pytest.approx(ref_block_frequency(seq_1m[:10**5], 128), abs=1e-9)
        ]

    def test_runs(self, seq_1m):
        got = run_single_test("runs", seq_1m, CFG)
        assert got == [pytest.approx(ref_runs(seq_1m), abs=1e-10)]

    @pytest.mark.parametrize("n", [1000, 50000, 10**6])
    def test_longest_run_all_regimes(self, seq_1m, n):
        got = run_single_test("longest_run", seq_1m[:n], CFG)
        assert got == [pytest.approx(ref_longest_run(seq_1m[:n]), abs=1e-9)]

    def test_rank(self, seq_1m):
        got = run_single_test("rank", seq_1m[:40960], CFG)
        assert got == [pytest.approx(ref_rank(seq_1m[:40960]), abs=1e-9)]

    def test_spectral(self, seq_1m):
        got = run_single_test("fft", seq_1m[:2048], CFG)
        assert got == [pytest.approx(ref_spectral(seq_1m[:2048]), abs=1e-8)]

    def test_nonoverlapping_all_templates(self, seq_1m):
        templates = load_templates_m9()
        got = run_single_test("nonoverlapping", seq_1m[:50000], CFG)
        want = ref_nonoverlapping(seq_1m[:50000], templates)
        assert len(got) == 148
        np.testing.assert_allclose(got, want, atol=1e-9)

    def test_overlapping(self, seq_1m):
        got = run_single_test("overlapping", seq_1m, CFG)
        assert got == [pytest.approx(ref_overlapping(seq_1m), abs=1e-9)]

    def test_universal(self, seq_1m):
        got = run_single_test("universal", seq_1m, CFG)
        assert got == [pytest.approx(ref_universal(seq_1m), abs=1e-9)]

    def test_linear_complexity(self, seq_1m):
        got = run_single_test("linear_complexity", seq_1m[:10000], CFG)
        assert got == [
            pytest.approx(ref_linear_complexity(seq_1m[:10000]), abs=1e-9)
        ]

    def test_serial(self, seq_1m):
        cfg = SuiteConfig(serial_m=10)
        got = run_single_test("serial", seq_1m[:50000], cfg)
        want = ref_serial(seq_1m[:50000], 10)
        assert got == [pytest.approx(want[0], abs=1e-9),
                       pytest.approx(want[1], abs=1e-9)]

    def test_approximate_entropy(self, seq_1m):
        got = run_single_test("approximate_entropy", seq_1m[:50000], CFG)
        assert got == [
            pytest.approx(ref_approximate_entropy(seq_1m[:50000], 10), abs=1e-9)
        ]

    def test_cusum(self, seq_1m):
        got = run_single_test("cusum", seq_1m, CFG)
        want = ref_cusum(seq_1m)
        assert got == [pytest.approx(want[0], abs=1e-9),
                       pytest.approx(want[1], abs=1e-9)]

    def test_random_excursions(self, seq_1m):
        got = run_single_test("random_excursions", seq_1m, CFG)
        want = ref_random_excursions(seq_1m)
        assert None not in want, "walk must reach 500 cycles for this seed"
        np.testing.assert_allclose(got, want, atol=1e-9)

    def test_random_excursions_variant(self, seq_1m):
        got = run_single_test("random_excursions_variant", seq_1m, CFG)
        want = ref_random_excursions_variant(seq_1m)
        np.testing.assert_allclose(got, want, atol=1e-9)


# ---------------------------------------------------------------------------
# Structural properties.


class TestStructure:
    SHORT_CFG = SuiteConfig(serial_m=7, approx_entropy_m=5)

    SEQUENCES = {
        "zeros": np.zeros(2000, dtype=np.uint8),
        "ones": np.ones(2000, dtype=np.uint8),
        "alternating": (np.arange(2000) % 2).astype(np.uint8),
        "random": np.random.default_rng(5).integers(0, 2, 2000, dtype=np.uint8),
    }

    @pytest.mark.parametrize("name", sorted(SEQUENCES))
    @pytest.mark.parametrize("spec", TEST_ORDER, ids=lambda s: s.test_id)
    def test_pvalues_in_unit_interval(self, spec, name):
        pvals = run_single_test(spec.test_id, self.SEQUENCES[name],
                                self.SHORT_CFG)
        assert isinstance(pvals, list) and pvals
        for p in pvals:
            assert p is None or 0.0 <= p <= 1.0

    def test_subtest_counts(self, seq_1m):
        want = {
            "frequency": 1, "block_frequency": 1, "runs": 1, "longest_run": 1,
            "rank": 1, "fft": 1, "nonoverlapping": 148, "overlapping": 1,
            "universal": 1, "linear_complexity": 1, "serial": 2,
            "approximate_entropy": 1, "cusum": 2, "random_excursions": 8,
            "random_excursions_variant": 18,
        }
        for spec in TEST_ORDER:
            got = run_single_test(spec.test_id, seq_1m, CFG)
            assert len(got) == want[spec.test_id], spec.test_id

    def test_extreme_sequences(self):
        zeros = np.zeros(2000, dtype=np.uint8)
        alt = (np.arange(2000) % 2).astype(np.uint8)
        assert run_single_test("frequency", zeros, CFG)[0] < 1e-10
        assert run_single_test("runs", zeros, CFG) == [0.0]
        assert run_single_test("frequency", alt, CFG) == [1.0]
        assert run_single_test("runs", alt, CFG)[0] < 1e-10

    def test_not_applicable_markers(self):
        short = np.ones(120, dtype=np.uint8)
        assert run_single_test("longest_run", short, CFG) == [None]
        assert run_single_test("rank", short, CFG) == [None]
        assert run_single_test("overlapping", short, CFG) == [None]
        assert run_single_test("universal", np.ones(5000, dtype=np.uint8),
                               CFG) == [None]
        assert run_single_test("serial", short, CFG) == [None, None]
        # A heavily biased walk never returns to zero often enough.
        ones = np.ones(10**5, dtype=np.uint8)
        assert run_single_test("random_excursions", ones, CFG) \
            == [None] * 8
        assert run_single_test("random_excursions_variant", ones, CFG) \
            == [None] * 18

    def test_unknown_test_id(self):
        from mtjrng.errors import ValidationError

        with pytest.raises(ValidationError):
            run_single_test("chi_squared", np.ones(200, dtype=np.uint8), CFG)
