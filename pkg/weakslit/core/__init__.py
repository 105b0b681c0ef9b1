from .config import settings
from .errors import (
    DataParseError,
    DataValidationError,
    DegenerateDenominatorError,
    DomainError,
    NumericalError,
    UsageError,
    ValidationFailure,
    WeakSlitError,
)

__all__ = [
    "settings",
    "WeakSlitError",
    "DomainError",
    "NumericalError",
    "DegenerateDenominatorError",
    "DataParseError",
    "DataValidationError",
    "UsageError",
    "ValidationFailure",
]
