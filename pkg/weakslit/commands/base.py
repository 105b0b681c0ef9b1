"""
Shared command plumbing: the parser class, common output flags and run configs.
"""
import argparse
from typing import List, Optional, Type, TypeVar

from pydantic import BaseModel, ConfigDict, ValidationError

from weakslit.core.config import settings
from weakslit.core.errors import UsageError
from weakslit.utils.responses import OutputFormat

ConfigT = TypeVar("ConfigT", bound="RunConfig")


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser that reports bad flags as UsageError instead of exiting."""

    def error(self, message: str) -> None:
        raise UsageError(detail=f"{self.format_usage().strip()}\n{self.prog}: error: {message}")


class RunConfig(BaseModel):
    """
    Flags common to every command.
    """
    model_config = ConfigDict(frozen=True, extra="ignore")

    out: str = "-"
    format: OutputFormat = OutputFormat.csv

    @classmethod
    def from_args(cls: Type[ConfigT], args: argparse.Namespace) -> ConfigT:
        """
        Validate parsed flags; flag conflicts become usage errors.
        """
        try:
            return cls.model_validate(vars(args))
        except ValidationError as exc:
            messages = "; ".join(error["msg"] for error in exc.errors())
            raise UsageError(detail=messages, params={"command": args.command}) from exc


def add_output_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default="-", help="output file, '-' for stdout")
    parser.add_argument(
        "--format",
        choices=[f.value for f in OutputFormat],
        default=settings.OUTPUT_FORMAT,
        help="output format",
    )


def float_list(text: str) -> List[float]:
    """Parse 'a1,a2,...' into floats."""
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def exactly_one(*values: Optional[object]) -> bool:
    return sum(value is not None for value in values) == 1
