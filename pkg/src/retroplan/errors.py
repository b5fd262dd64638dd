"""Exception types shared across the package."""


class RetroplanError(Exception):
    """Base class for all package errors."""


class ConfigError(RetroplanError):
    """Invalid configuration: bad column map, missing parameter, bad profile."""


class DataError(RetroplanError):
    """Input data violates a contract that cannot be handled per-row."""


class EligibilityError(RetroplanError):
    """A project was requested for a dwelling type it does not apply to."""


class HeatingBudgetError(RetroplanError):
    """Prior heating-channel savings exceed the heating share of demand."""


class ModelFormatError(RetroplanError):
    """Model artifact is unreadable: wrong version or failed checksum."""


class RankDeficientError(RetroplanError):
    """Design matrix is rank deficient; names the collinear columns."""

    def __init__(self, columns):
        self.columns = list(columns)
        super().__init__(f"design matrix is rank deficient in columns: {', '.join(self.columns)}")


class ClampWarning(UserWarning):
    """A physically impossible negative prediction was clamped to zero."""
