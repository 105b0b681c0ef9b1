import logging
import sys
from typing import Callable, List, Optional, Sequence, Tuple, Type

from pydantic import ValidationError

from weakslit.commands import build_parser
from weakslit.core.config import settings
from weakslit.core.errors import EXIT_DOMAIN, EXIT_OK, ErrorResponse, WeakSlitError

logger = logging.getLogger(__name__)


def configure_logging() -> None:
    """Log records go to stderr; stdout is reserved for command output."""
    logging.basicConfig(
        level=settings.LOG_LEVEL,
        format=settings.LOG_FORMAT,
        stream=sys.stderr,
    )


def _report(response: ErrorResponse) -> None:
    sys.stderr.write(f"{settings.PROJECT_NAME}: {response.detail}\n")


# Error handlers
def weakslit_error_handler(exc: WeakSlitError) -> int:
    """Handle library and usage errors."""
    logger.debug(f"{exc.code}: {exc.params}")
    _report(exc.to_response())
    return exc.exit_code


def validation_error_handler(exc: ValidationError) -> int:
    """Handle invalid domain values rejected by the schemas."""
    messages = "; ".join(
        f"{'.'.join(str(part) for part in error['loc'])}: {error['msg']}" if error["loc"] else error["msg"]
        for error in exc.errors()
    )
    _report(ErrorResponse(detail=f"invalid input: {messages}", code="DOMAIN_ERROR"))
    return EXIT_DOMAIN


def unexpected_error_handler(exc: Exception) -> int:
    """Handle anything else."""
    logger.error(f"Unexpected error: {exc}", exc_info=True)
    _report(ErrorResponse(detail=f"unexpected error: {exc}", code="INTERNAL_ERROR"))
    return EXIT_DOMAIN


EXCEPTION_HANDLERS: List[Tuple[Type[Exception], Callable[..., int]]] = [
    (WeakSlitError, weakslit_error_handler),
    (ValidationError, validation_error_handler),
    (Exception, unexpected_error_handler),
]


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse the command line, run the selected command and return its exit code.
    """
    configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logger.info(f"Running {args.command} with {vars(args)}")
        return args.handler(args) or EXIT_OK
    except SystemExit as exc:
        # --help and --version
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    except Exception as exc:
        for exc_type, handler in EXCEPTION_HANDLERS:
            if isinstance(exc, exc_type):
                return handler(exc)
        raise


if __name__ == "__main__":
    sys.exit(main())
