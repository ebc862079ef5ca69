"""NIST SP 800-22 statistical test suite with two-level evaluation."""

from .special import erfc, igamc
from .suite import (
    SuiteConfig,
    SuiteReport,
    TEST_ORDER,
    proportion_threshold,
    run_single_test,
    run_suite,
    uniformity_of_pvalues,
    write_csv,
)

__all__ = [
    "erfc",
    "igamc",
    "SuiteConfig",
    "SuiteReport",
    "TEST_ORDER",
    "proportion_threshold",
    "run_single_test",
    "run_suite",
    "uniformity_of_pvalues",
    "write_csv",
]
