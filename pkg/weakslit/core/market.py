"""
OHLCV ingestion, relative-volume event scanning and scenario return statistics.

A scan flags bars whose volume is well above its trailing average, merges
nearby runs and turns each run into a double slit: the largest and smallest
log-prices of the window become +-x_i around the shift c.
"""
import logging
import math
import re
from pathlib import Path
from typing import List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import ValidationError

from weakslit.core.config import settings
from weakslit.core.coordinates import from_centered, midpoint_frame, to_centered
from weakslit.core.errors import DataParseError, DataValidationError, DomainError
from weakslit.core.weak_value import forward_two_slit
from weakslit.schemas.bars import IntervalEvent, PriceBar, ScenarioSet
from weakslit.schemas.market import (
    LogPriceFrame,
    MarketParams,
    SlitConfig,
    SlitSide,
    TrajectoryRequest,
)

logger = logging.getLogger(__name__)

BAR_COLUMNS = ["timestamp", "open", "high", "low", "close", "volume"]
_INTEGER = re.compile(r"^[+-]?\d+$")
_DECIMAL = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")
_FIELD_COUNT = re.compile(r"Expected (\d+) fields in line (\d+), saw (\d+)")

CsvSource = Union[str, Path, TextIO]


def _matches(pattern: re.Pattern, cell) -> bool:
    return isinstance(cell, str) and pattern.match(cell) is not None


def _read_frame(csv_source: CsvSource) -> pd.DataFrame:
    # header=None: the header line fixes the field count, so a longer row is a
    # tokenizer error instead of being silently truncated.
    try:
        return pd.read_csv(
            csv_source,
            header=None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=True,
            encoding="utf-8",
        )
    except FileNotFoundError as exc:
        raise DataParseError(detail=f"CSV file not found: {csv_source}", code="FILE_NOT_FOUND") from exc
    except pd.errors.EmptyDataError as exc:
        raise DataParseError(detail="CSV input is empty; expected a header", params={"line": 1}) from exc
    except pd.errors.ParserError as exc:
        found = _FIELD_COUNT.search(str(exc))
        if found is None:
            raise DataParseError(detail=f"Malformed CSV: {exc}") from exc
        expected, line, seen = (int(group) for group in found.groups())
        raise DataParseError(
            detail=f"Row {line - 1} has {seen} fields, expected {expected}",
            params={"line": line, "rows": [line - 1]},
        ) from exc
    except UnicodeDecodeError as exc:
        raise DataParseError(detail=f"Malformed CSV: {exc}") from exc


def load_bars(csv_source: CsvSource) -> List[PriceBar]:
    """
    Parse and validate OHLCV bars.

    The header must be exactly ``timestamp,open,high,low,close,volume``.
    Header names are compared verbatim, padding included. Every data row must
    carry exactly as many fields as the header. Row numbers in errors are
    1-based data rows (the header is line 1, row 1 is line 2). Timestamps must
    already be strictly increasing.
    """
    raw = _read_frame(csv_source)
    header = list(raw.iloc[0])
    if header != BAR_COLUMNS:
        raise DataParseError(
            detail=f"Expected header {','.join(BAR_COLUMNS)}, got {','.join(map(str, header))}",
            params={"line": 1, "header": header},
        )
    frame = raw.iloc[1:].set_axis(BAR_COLUMNS, axis="columns")
    if frame.empty:
        return []
    frame = frame.apply(lambda column: column.str.strip())

    malformed = []
    for row, record in enumerate(frame.itertuples(index=False), start=1):
        cells = record._asdict()
        if not _matches(_INTEGER, cells["timestamp"]) or not all(
            _matches(_DECIMAL, cells[name]) for name in BAR_COLUMNS[1:]
        ):
            malformed.append(row)
    if malformed:
        raise DataParseError(
            detail=f"Unparseable values in rows {malformed}",
            params={"rows": malformed},
        )

    bars, rejected = [], []
    for row, record in enumerate(frame.itertuples(index=False), start=1):
        try:
            bars.append(
                PriceBar(
                    timestamp=int(record.timestamp),
                    open=float(record.open),
                    high=float(record.high),
                    low=float(record.low),
                    close=float(record.close),
                    volume=float(record.volume),
                )
            )
        except ValidationError as exc:
            logger.warning(f"Rejected row {row}: {exc.errors()[0]['msg']}")
            rejected.append(row)
    if rejected:
        raise DataValidationError(
            detail=f"Rows violate the OHLCV invariants: {rejected}",
            params={"rows": rejected},
        )

    unordered = [
        row for row, (previous, current) in enumerate(zip(bars, bars[1:]), start=2)
        if current.timestamp <= previous.timestamp
    ]
    if unordered:
        raise DataValidationError(
            detail=f"Timestamps are not strictly increasing at rows {unordered}",
            code="NON_MONOTONE_TIMESTAMPS",
            params={"rows": unordered},
        )

    logger.info(f"Loaded {len(bars)} bars")
    return bars


def relative_volume(bars: Sequence[PriceBar], window: Optional[int] = None) -> np.ndarray:
    """
    Volume over the mean volume of the previous ``window`` bars.

    The first ``window`` entries and entries with a zero trailing mean are NaN.
    """
    window = settings.RVOL_WINDOW if window is None else window
    if window < 2:
        raise DomainError(detail=f"window must be at least 2, got {window}")
    if len(bars) < window:
        raise DomainError(
            detail=f"need at least {window} bars for the relative volume, got {len(bars)}",
            params={"window": window, "bars": len(bars)},
        )
    volume = pd.Series([bar.volume for bar in bars], dtype=float)
    trailing = volume.rolling(window).mean().shift(1)
    return (volume / trailing.where(trailing > 0)).to_numpy()


def interval_to_slits(bars_in_window: Sequence[PriceBar], rvol: Optional[Sequence[float]] = None) -> IntervalEvent:
    if not bars_in_window:
        raise DomainError(detail="interval has no bars")
    O1 = max(math.log(bar.high) for bar in bars_in_window)
    O2 = min(math.log(bar.low) for bar in bars_in_window)
    timestamps = [bar.timestamp for bar in bars_in_window]
    peak = math.nan
    if rvol is not None and np.any(np.isfinite(rvol)):
        peak = float(np.nanmax(rvol))
    return IntervalEvent(
        t_start=min(timestamps),
        t_end=max(timestamps),
        t_mean=math.fsum(timestamps) / len(timestamps),
        O1=O1,
        O2=O2,
        c=midpoint_frame(O1, O2).c,
        x_i=0.5 * (O1 - O2),
        peak_rvol=peak,
    )


def _runs(hot: np.ndarray, merge_gap: int) -> List[Tuple[int, int]]:
    runs: List[Tuple[int, int]] = []
    for index in np.flatnonzero(hot):
        index = int(index)
        if runs and index - runs[-1][1] - 1 <= merge_gap:
            runs[-1] = (runs[-1][0], index)
        else:
            runs.append((index, index))
    return runs


def detect_events(
    bars: Sequence[PriceBar],
    rvol: Sequence[float],
    threshold: Optional[float] = None,
    merge_gap: Optional[int] = None,
) -> List[IntervalEvent]:
    """Maximal runs with RVOL >= threshold, runs at most ``merge_gap`` bars apart merged."""
    threshold = settings.RVOL_THRESHOLD if threshold is None else threshold
    merge_gap = settings.MERGE_GAP if merge_gap is None else merge_gap
    if not threshold > 1:
        raise DomainError(detail=f"threshold must exceed 1, got {threshold}")
    if merge_gap < 0:
        raise DomainError(detail=f"merge_gap must be nonnegative, got {merge_gap}")
    rvol = np.asarray(rvol, dtype=float)
    if rvol.shape != (len(bars),):
        raise DomainError(detail="rvol must have one value per bar")

    with np.errstate(invalid="ignore"):
        hot = rvol >= threshold
    events = [
        interval_to_slits(bars[start:end + 1], rvol[start:end + 1])
        for start, end in _runs(hot, merge_gap)
    ]
    logger.info(f"Detected {len(events)} events at threshold {threshold}")
    return events


def expected_return(s: ScenarioSet) -> float:
    return math.fsum(p * R for p, R in s.scenarios)


def return_variance(s: ScenarioSet) -> float:
    mean = expected_return(s)
    return math.fsum(p * (R - mean) ** 2 for p, R in s.scenarios)


def return_std(s: ScenarioSet) -> float:
    return math.sqrt(return_variance(s))


def risk_band(s: ScenarioSet) -> Tuple[float, float]:
    """Return range E +- sigma."""
    mean, std = expected_return(s), return_std(s)
    return mean - std, mean + std


def risk_premium(expected: float, r: float, sigma: float) -> float:
    if not sigma > 0:
        raise DomainError(detail=f"sigma must be positive, got {sigma}", params={"sigma": sigma})
    return (expected - r) / sigma


def fractional_return(S_t: float, S_tT: float, dividends: float = 0.0) -> float:
    if not S_t > 0:
        raise DomainError(detail=f"S_t must be positive, got {S_t}", params={"S_t": S_t})
    return (S_tT + dividends - S_t) / S_t


def trajectory_for_event(
    event: IntervalEvent,
    final_price: float,
    params: MarketParams,
    steps: Optional[int] = None,
) -> TrajectoryRequest:
    """Forward double slit of an event: slits at +-x_i, final price ln(S) - c."""
    frame = LogPriceFrame(c=event.c)
    positions = [event.x_i, -event.x_i] if event.x_i > 0 else [0.0]
    return TrajectoryRequest(
        slits=SlitConfig(
            positions=positions,
            endpoint=to_centered(final_price, frame),
            side=SlitSide.pre,
        ),
        params=params,
        frame=frame,
        steps=settings.TRAJECTORY_STEPS if steps is None else steps,
    )


def event_weak_price(event: IntervalEvent, final_price: float, params: MarketParams) -> Tuple[float, float]:
    """Weak log-price at the start of the event horizon and the price it stands for."""
    frame = LogPriceFrame(c=event.c)
    x_f = to_centered(final_price, frame)
    x_w = forward_two_slit(event.x_i, x_f, params.T, params.T, params)
    return x_w, from_centered(x_w, frame)
