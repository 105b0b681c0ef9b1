"""
weakslit scan: relative-volume events of an OHLCV file, each reduced to a double slit.
"""
import argparse
import logging
from typing import Optional

from pydantic import model_validator

from weakslit.commands.base import RunConfig, add_output_arguments
from weakslit.core.config import settings
from weakslit.core.market import detect_events, event_weak_price, load_bars, relative_volume
from weakslit.schemas.market import MarketParams
from weakslit.utils.responses import Table, write_table

logger = logging.getLogger(__name__)

EVENT_COLUMNS = ["t_start", "t_end", "t_mean", "O1", "O2", "c", "x_i", "peak_rvol"]
PRICE_COLUMNS = ["x_w", "S_w"]


class ScanConfig(RunConfig):
    csv: str
    rvol_threshold: float
    window: int
    merge_gap: int
    final_price: Optional[float] = None
    r: Optional[float] = None
    sigma: Optional[float] = None
    T: Optional[float] = None

    @model_validator(mode="after")
    def _check_pricing(self) -> "ScanConfig":
        pricing = (self.r, self.sigma, self.T)
        if self.final_price is None and any(v is not None for v in pricing):
            raise ValueError("--r, --sigma and --T only apply together with --final-price")
        if self.final_price is not None and any(v is None for v in pricing):
            raise ValueError("--final-price needs --r, --sigma and --T")
        return self


def run(args: argparse.Namespace) -> int:
    """
    Scan the bars and write one row per event, optionally priced against a final price.
    """
    config = ScanConfig.from_args(args)
    bars = load_bars(config.csv)
    events = []
    if bars:
        rvol = relative_volume(bars, config.window)
        events = detect_events(bars, rvol, config.rvol_threshold, config.merge_gap)

    columns = list(EVENT_COLUMNS)
    params = None
    if config.final_price is not None:
        columns += PRICE_COLUMNS
        params = MarketParams(r=config.r, sigma=config.sigma, T=config.T)

    rows = []
    for event in events:
        row = event.model_dump(include=set(EVENT_COLUMNS))
        if params is not None:
            row["x_w"], row["S_w"] = event_weak_price(event, config.final_price, params)
        rows.append(row)

    write_table(Table(columns=columns, rows=rows), config.out, config.format,
                message=f"{len(rows)} events")
    logger.info(f"scan: {len(bars)} bars, {len(rows)} events")
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("scan", help="detect high relative-volume intervals in OHLCV data")
    parser.add_argument("--csv", required=True, help="OHLCV file with header timestamp,open,high,low,close,volume")
    parser.add_argument("--rvol-threshold", type=float, default=settings.RVOL_THRESHOLD)
    parser.add_argument("--window", type=int, default=settings.RVOL_WINDOW)
    parser.add_argument("--merge-gap", type=int, default=settings.MERGE_GAP)
    parser.add_argument("--final-price", type=float, help="price the events against this final price")
    parser.add_argument("--r", type=float)
    parser.add_argument("--sigma", type=float)
    parser.add_argument("--T", type=float)
    add_output_arguments(parser)
    parser.set_defaults(handler=run)
