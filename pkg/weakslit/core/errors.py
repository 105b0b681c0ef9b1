"""
Error hierarchy shared by the library and the command line.

Every error carries the process exit code the CLI reports for it, a
human-readable detail, a stable machine code and optional parameters.
"""
from typing import Any, Dict, Optional

from pydantic import BaseModel


EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_VALIDATION = 3


class ErrorResponse(BaseModel):
    """
    Standard error report model.
    """
    detail: str
    code: Optional[str] = None
    params: Optional[Dict[str, Any]] = None


class WeakSlitError(Exception):
    """
    Base error that includes exit code, error code and parameters.
    """
    def __init__(
        self,
        exit_code: int,
        detail: str,
        code: Optional[str] = None,
        params: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(detail)
        self.exit_code = exit_code
        self.detail = detail
        self.code = code
        self.params = params or {}

    def to_response(self) -> ErrorResponse:
        return ErrorResponse(detail=self.detail, code=self.code, params=self.params or None)


class DomainError(WeakSlitError):
    """
    Input outside the mathematical domain of an operation.
    """
    def __init__(
        self,
        detail: str = "Domain error",
        code: Optional[str] = "DOMAIN_ERROR",
        params: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(
            exit_code=EXIT_DOMAIN,
            detail=detail,
            code=code,
            params=params,
        )


class NumericalError(WeakSlitError):
    """
    A numerical procedure failed; params carry the diagnostics.
    """
    def __init__(
        self,
        detail: str = "Numerical error",
        code: Optional[str] = "NUMERICAL_ERROR",
        params: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(
            exit_code=EXIT_DOMAIN,
            detail=detail,
            code=code,
            params=params,
        )


class DegenerateDenominatorError(NumericalError):
    """
    Every weighted kernel amplitude of a weak-value ratio vanished.
    """
    def __init__(
        self,
        detail: str = "All weighted kernel amplitudes vanish",
        code: Optional[str] = "DEGENERATE_DENOMINATOR",
        params: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(detail=detail, code=code, params=params)


class DataParseError(WeakSlitError):
    """
    Malformed input file.
    """
    def __init__(
        self,
        detail: str = "Malformed input",
        code: Optional[str] = "PARSE_ERROR",
        params: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(
            exit_code=EXIT_DOMAIN,
            detail=detail,
            code=code,
            params=params,
        )


class DataValidationError(WeakSlitError):
    """
    Well-formed input whose rows violate a data invariant.
    """
    def __init__(
        self,
        detail: str = "Data validation error",
        code: Optional[str] = "DATA_VALIDATION_ERROR",
        params: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(
            exit_code=EXIT_DOMAIN,
            detail=detail,
            code=code,
            params=params,
        )


class UsageError(WeakSlitError):
    """
    Missing or conflicting command-line flags.
    """
    def __init__(
        self,
        detail: str = "Invalid usage",
        code: Optional[str] = "USAGE_ERROR",
        params: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(
            exit_code=EXIT_USAGE,
            detail=detail,
            code=code,
            params=params,
        )


class ValidationFailure(WeakSlitError):
    """
    An oracle comparison exceeded its tolerance.
    """
    def __init__(
        self,
        detail: str = "Validation failed",
        code: Optional[str] = "VALIDATION_FAILED",
        params: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(
            exit_code=EXIT_VALIDATION,
            detail=detail,
            code=code,
            params=params,
        )
