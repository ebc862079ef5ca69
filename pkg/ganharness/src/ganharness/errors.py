"""Exception taxonomy for the harness.

ValidationError covers bad arguments and inconsistent inputs, FormatError
covers unreadable or corrupt files, InputSizeError covers inputs too small
for the requested analysis, and DependencyError covers missing optional
resources (weights, packages). CLI exit codes map FormatError and OSError
to 2 and everything else to 1.
"""


class GanHarnessError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(GanHarnessError):
    pass


class FormatError(GanHarnessError):
    pass


class InputSizeError(GanHarnessError):
    pass


class DependencyError(GanHarnessError):
    pass
