"""Exception hierarchy.

Validation problems (bad dimensions, bad spike, bad config) and numerical
domain problems (arguments outside the region where a formula holds) are kept
apart because the CLI maps them to different exit codes.
"""


class SpikedLRError(Exception):
    """Base class for all library errors."""

    code = "E000"


class ValidationError(SpikedLRError, ValueError):
    code = "E100"


class InvalidDimensionError(ValidationError):
    code = "E101"


class InvalidSpikeError(ValidationError):
    code = "E102"


class ConfigError(ValidationError):
    code = "E103"


class NumericalError(SpikedLRError, ArithmeticError):
    code = "E200"


class DomainError(NumericalError):
    code = "E201"


class NumericalRankError(NumericalError):
    code = "E202"


class ConvergenceError(NumericalError):
    code = "E203"


class BranchCutError(DomainError):
    code = "E204"


class BranchError(DomainError):
    code = "E205"


class ToleranceError(NumericalError):
    code = "E206"


class UnsupportedScaleError(NumericalError):
    code = "E207"


class DomainWarning(RuntimeWarning):
    """An approximation was evaluated outside the region where it is uniform."""
