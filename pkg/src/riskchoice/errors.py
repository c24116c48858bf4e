"""Exception types shared across the package.

The CLI maps these onto process exit codes: usage/config problems exit 1,
data and input problems exit 2, numerical failures exit 3.
"""


class RiskChoiceError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(RiskChoiceError):
    """Bad command-line arguments or flag combinations."""


class ConfigError(RiskChoiceError):
    """Invalid configuration values."""


class InputError(RiskChoiceError):
    """Operation inputs violate a documented precondition."""


class DataParseError(InputError):
    """Malformed dataset file; names the offending line when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NumericalError(RiskChoiceError):
    """A numerical routine failed (singular matrix, divergence)."""


class EstimationError(NumericalError):
    """Model estimation failed; carries per-restart records when available."""

    def __init__(self, message: str, restart_log: list | None = None):
        super().__init__(message)
        self.restart_log = restart_log if restart_log is not None else []


class UndefinedEffectSizeError(RiskChoiceError):
    """Effect size undefined for the given data (constant column or outcome).

    Deliberately distinct from a zero effect: a constant column carries no
    information about association, so reporting 0 would be misleading.
    """


class UndefinedMetricError(RiskChoiceError):
    """Metric undefined for the given data (e.g. single-class labels)."""
