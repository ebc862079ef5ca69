"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ValidationError -> 1, FormatError -> 2.
"""


class MtjRngError(Exception):
    """Base class for all package errors."""


class ValidationError(MtjRngError):
    """Invalid parameter, seed, or input violating a documented invariant."""


class FormatError(MtjRngError):
    """Malformed, truncated, or version-mismatched file content."""


class ConfigError(ValidationError):
    """Malformed configuration (JSON schema, Toeplitz seed length, ...)."""


class InputSizeError(ValidationError):
    """Input stream too short for the requested operation."""


class CalibrationError(MtjRngError):
    """Calibration did not converge for a device."""


class PrecisionError(MtjRngError):
    """FFT convolution rounding residue exceeded the safe tolerance."""
