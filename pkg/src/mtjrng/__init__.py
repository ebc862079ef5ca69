"""Simulation pipeline for spintronic true-random-number generation.

Covers the stochastic device array, bias/correlation conditioning (XOR and
Toeplitz hashing), a NIST SP 800-22 evaluation suite, reference PRNGs,
latent-vector emission, and throughput/energy models.
"""

from .errors import (
    CalibrationError,
    ConfigError,
    FormatError,
    InputSizeError,
    MtjRngError,
    PrecisionError,
    ValidationError,
)

__version__ = "0.1.0"

__all__ = [
    "CalibrationError",
    "ConfigError",
    "FormatError",
    "InputSizeError",
    "MtjRngError",
    "PrecisionError",
    "ValidationError",
    "__version__",
]
