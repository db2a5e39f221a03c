"""Exception hierarchy.

Everything raised for bad inputs derives from :class:`ValidationError`, which the
command line maps to exit code 1. Filesystem problems surface as ``OSError``
(exit code 2).
"""


class ForecastRiskError(Exception):
    """Base class for all package errors."""


class ValidationError(ForecastRiskError, ValueError):
    """Input failed a contract check."""


class AlignmentError(ValidationError):
    """Two series (or a series and its labels) do not line up period by period."""


class IncompatibleRuleError(ValidationError):
    """Series scored under different scoring rules were combined."""


class UnsupportedRuleError(ValidationError):
    """Operation does not accept the requested scoring rule."""


class InsufficientDataError(ValidationError):
    """Too few observations for the requested statistic."""


class LagRangeError(ValidationError):
    """Autocovariance lag outside ``0 <= k < T``."""


class PoolTooSmallError(ValidationError):
    """Edge computations need at least two models in the pool."""


class PoolConsistencyError(ValidationError):
    """Cells of a meta grid do not share the same model pool."""


class NormalizationError(ValidationError):
    """Percentage returns requested against a non-positive benchmark value."""


class DomainError(ValidationError):
    """Argument outside the mathematical domain of the operation."""


class ConfigError(ValidationError):
    """Invalid manifest, HAC or simulation configuration."""


class ParseError(ValidationError):
    """Malformed input file. The message carries file/line/column context."""

    def __init__(self, message, path=None, line=None, column=None):
        self.path = path
        self.line = line
        self.column = column
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column!r}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class EmptyInputError(ParseError):
    """Input file has no data rows."""


class DuplicateKeyError(ParseError):
    """Same key appears on more than one row."""


class BenchmarkAbsentError(ValidationError):
    """Declared benchmark does not occur in the data."""
