"""Two-level suite evaluation: pass proportion and uniformity of p-values.

A sub-test passes when the proportion of per-sequence p-values at or above
alpha meets the binomial threshold AND the p-values are uniform on [0, 1]
(chi-square over 10 bins, P_T >= 1e-4). A test row passes when every
sub-test does. The CSV writer mirrors the row layout used for side-by-side
RNG comparison: single-sub-test rows print P_T, multi-sub-test rows print
PASS or FAIL.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from ..bitstream import RawBitstream
from ..errors import InputSizeError, ValidationError
from . import randtests
from .special import igamc

UNIFORMITY_ALPHA = 1e-4


@dataclass(frozen=True)
class SuiteConfig:
    sequence_length: int = 10**6
    n_sequences: int = 55
    alpha: float = 0.01
    block_frequency_m: int = 128
    nonoverlapping_m: int = 9
    overlapping_m: int = 9
    universal_l: int = 7
    universal_q: int = 1280
    linear_complexity_m: int = 500
    serial_m: int = 16
    approx_entropy_m: int = 10

    def __post_init__(self):
        if self.sequence_length < 100:
            raise ValidationError("sequence_length must be at least 100")
        if self.n_sequences < 1:
            raise ValidationError("n_sequences must be positive")
        if not 0.0 < self.alpha < 1.0:
            raise ValidationError("alpha must lie in (0, 1)")
        for name in ("block_frequency_m", "nonoverlapping_m", "overlapping_m",
                     "universal_l", "universal_q", "linear_complexity_m",
                     "serial_m", "approx_entropy_m"):
            if getattr(self, name) < 1:
                raise ValidationError(f"{name} must be positive")


@dataclass(frozen=True)
class TestSpec:
    test_id: str
    display_name: str
    fn: object
    multi: bool


TEST_ORDER = (
    TestSpec("frequency", "Frequency", randtests.frequency, False),
    TestSpec("block_frequency", "Block frequency", randtests.block_frequency, False),
    TestSpec("runs", "Runs", randtests.runs, False),
    TestSpec("longest_run", "Longest run", randtests.longest_run, False),
    TestSpec("rank", "Rank", randtests.rank, False),
    TestSpec("fft", "FFT", randtests.spectral_fft, False),
    TestSpec("nonoverlapping", "Non-overlapping template",
             randtests.nonoverlapping_template, True),
    TestSpec("overlapping", "Overlapping template",
             randtests.overlapping_template, False),
    TestSpec("universal", "Universal", randtests.universal, False),
    TestSpec("linear_complexity", "Linear complexity",
             randtests.linear_complexity, False),
    TestSpec("serial", "Serial", randtests.serial, True),
    TestSpec("approximate_entropy", "Approximate entropy",
             randtests.approximate_entropy, False),
    TestSpec("cusum", "Cumulative sum", randtests.cumulative_sums, True),
    TestSpec("random_excursions", "Random excursions",
             randtests.random_excursions, True),
    TestSpec("random_excursions_variant", "Random excursions variant",
             randtests.random_excursions_variant, True),
)

_BY_ID = {spec.test_id: spec for spec in TEST_ORDER}


def run_single_test(test_id: str, bits: np.ndarray, cfg: SuiteConfig) -> list:
    """P-values of one test on one sequence; None marks not-applicable."""
    if test_id not in _BY_ID:
        raise ValidationError(f"unknown test id {test_id!r}")
    bits = np.asarray(bits, dtype=np.uint8)
    return _BY_ID[test_id].fn(bits, cfg)


def proportion_threshold(n_sequences: int, alpha: float) -> float:
    """Minimum passing proportion for n_sequences at significance alpha."""
    if n_sequences < 1:
        raise ValidationError("n_sequences must be positive")
    p_hat = 1.0 - alpha
    return p_hat - 3.0 * math.sqrt(p_hat * alpha / n_sequences)


def uniformity_of_pvalues(pvalues) -> float | None:
    """Chi-square uniformity P_T of p-values over 10 equal bins; None if empty."""
    arr = np.asarray([p for p in pvalues if p is not None], dtype=np.float64)
    if arr.size == 0:
        return None
    bins = np.minimum((arr * 10).astype(np.int64), 9)
    counts = np.bincount(bins, minlength=10)
    expected = arr.size / 10.0
    chi2 = float(np.sum((counts - expected) ** 2 / expected))
    return float(igamc(4.5, chi2 / 2.0))


@dataclass
class SubtestResult:
    pvalues: list
    n_applicable: int
    n_pass: int
    proportion: float | None
    threshold: float | None
    p_uniformity: float | None
    passed: bool


@dataclass
class TestResult:
    test_id: str
    display_name: str
    multi: bool
    subtests: list
    passed: bool


@dataclass
class SuiteReport:
    source: str
    sequence_length: int
    n_sequences: int
    alpha: float
    results: list
    all_passed: bool

    def result(self, test_id: str) -> TestResult:
        for r in self.results:
            if r.test_id == test_id:
                return r
        raise KeyError(test_id)

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "sequence_length": self.sequence_length,
            "n_sequences": self.n_sequences,
            "alpha": self.alpha,
            "all_passed": self.all_passed,
            "results": [
                {
                    "test_id": r.test_id,
                    "display_name": r.display_name,
                    "passed": r.passed,
                    "subtests": [asdict(s) for s in r.subtests],
                }
                for r in self.results
            ],
        }

    def write_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")

    def summary_lines(self) -> list:
        lines = []
        for r in self.results:
            cell = _table_cell(r)
            verdict = "PASS" if r.passed else "FAIL"
            lines.append(f"{r.display_name:<28} {cell:>8}  {verdict}")
        lines.append(f"{'Overall':<28} {'':>8}  "
                     f"{'PASS' if self.all_passed else 'FAIL'}")
        return lines


def _aggregate_subtest(pvalues: list, alpha: float) -> SubtestResult:
    applicable = [p for p in pvalues if p is not None]
    n_app = len(applicable)
    n_pass = sum(1 for p in applicable if p >= alpha)
    if n_app == 0:
        return SubtestResult(pvalues, 0, 0, None, None, None, True)
    proportion = n_pass / n_app
    threshold = proportion_threshold(n_app, alpha)
    p_t = uniformity_of_pvalues(applicable)
    passed = proportion >= threshold and p_t >= UNIFORMITY_ALPHA
    return SubtestResult(pvalues, n_app, n_pass, proportion, threshold, p_t, passed)


def run_suite(stream: RawBitstream, cfg: SuiteConfig | None = None,
              *, source: str | None = None) -> SuiteReport:
    """Partition a stream into sequences, run all 15 tests, aggregate."""
    cfg = cfg or SuiteConfig()
    need = cfg.sequence_length * cfg.n_sequences
    if stream.n_bits < need:
        raise InputSizeError(
            f"suite needs {need} bits "
            f"({cfg.n_sequences} x {cfg.sequence_length}), "
            f"stream has {stream.n_bits}"
        )
    all_bits = stream.bits()
    per_test: dict = {spec.test_id: [] for spec in TEST_ORDER}
    for s in range(cfg.n_sequences):
        seq = all_bits[s * cfg.sequence_length:(s + 1) * cfg.sequence_length]
        for spec in TEST_ORDER:
            per_test[spec.test_id].append(spec.fn(seq, cfg))

    results = []
    for spec in TEST_ORDER:
        rows = per_test[spec.test_id]
        n_sub = max(len(r) for r in rows)
        subtests = []
        for j in range(n_sub):
            pvals = [row[j] if j < len(row) else None for row in rows]
            subtests.append(_aggregate_subtest(pvals, cfg.alpha))
        results.append(TestResult(
            test_id=spec.test_id,
            display_name=spec.display_name,
            multi=spec.multi,
            subtests=subtests,
            passed=all(s.passed for s in subtests),
        ))
    return SuiteReport(
        source=source if source is not None else stream.source,
        sequence_length=cfg.sequence_length,
        n_sequences=cfg.n_sequences,
        alpha=cfg.alpha,
        results=results,
        all_passed=all(r.passed for r in results),
    )


def _table_cell(result: TestResult) -> str:
    if result.multi:
        return "PASS" if result.passed else "FAIL"
    p_t = result.subtests[0].p_uniformity
    if p_t is None:
        return "NA"
    return f"{p_t:.2f}"


def write_csv(reports, path) -> None:
    """Side-by-side summary, one row per test, one column per stream."""
    reports = list(reports)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["Test name"] + [r.source for r in reports])
        for i, spec in enumerate(TEST_ORDER):
            writer.writerow(
                [spec.display_name]
                + [_table_cell(r.results[i]) for r in reports]
            )
        writer.writerow(
            ["Overall"]
            + [("PASS" if r.all_passed else "FAIL") for r in reports]
        )
