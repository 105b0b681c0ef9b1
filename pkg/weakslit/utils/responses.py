"""
Output utilities: every command produces a table written as CSV or as a JSON envelope.
"""
import io
import json
import math
import sys
from enum import Enum
from typing import Any, Dict, Generic, List, Optional, TypeVar

import numpy as np
import pandas as pd
from pydantic import BaseModel

from weakslit.core.config import settings


DataT = TypeVar("DataT")


class OutputFormat(str, Enum):
    csv = "csv"
    json = "json"


class Table(BaseModel):
    """
    Column names and one mapping per row.
    """
    columns: List[str]
    rows: List[Dict[str, Any]] = []


class ResponseMetadata(BaseModel):
    """
    Response metadata model.
    """
    code: str = "SUCCESS"
    message: Optional[str] = None


class Response(BaseModel, Generic[DataT]):
    """
    Standard output envelope.
    """
    data: Optional[DataT] = None
    meta: ResponseMetadata = ResponseMetadata()


def create_response(
    data: Any = None,
    message: Optional[str] = None,
    code: str = "SUCCESS",
) -> Dict[str, Any]:
    """
    Create a standardized response envelope.
    """
    return Response[Any](
        data=data,
        meta=ResponseMetadata(
            code=code,
            message=message,
        ),
    ).model_dump(mode="python")


def _json_value(value: Any) -> Any:
    if isinstance(value, (np.generic,)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    return value


def render_csv(table: Table) -> str:
    frame = pd.DataFrame(table.rows, columns=table.columns)
    buffer = io.StringIO()
    frame.to_csv(
        buffer,
        index=False,
        float_format=f"%.{settings.FLOAT_DIGITS}g",
        na_rep="nan",
        lineterminator="\n",
    )
    return buffer.getvalue()


def render_json(table: Table, message: Optional[str] = None) -> str:
    rows = [{column: _json_value(row[column]) for column in table.columns} for row in table.rows]
    envelope = create_response(
        data=Table(columns=table.columns, rows=rows).model_dump(),
        message=message,
    )
    return json.dumps(envelope, indent=2, allow_nan=False) + "\n"


def write_table(
    table: Table,
    out: str = "-",
    output_format: Optional[OutputFormat] = None,
    message: Optional[str] = None,
) -> None:
    """
    Write a table to ``out``; ``-`` means stdout.
    """
    output_format = OutputFormat(output_format or settings.OUTPUT_FORMAT)
    if output_format == OutputFormat.json:
        text = render_json(table, message)
    else:
        text = render_csv(table)
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
