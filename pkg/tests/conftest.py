import csv
import os
from pathlib import Path
from typing import Callable, Dict, List, Sequence

import pytest
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Quiet, deterministic defaults for the test run
os.environ.setdefault("LOG_LEVEL", "WARNING")
os.environ.setdefault("WEAKSLIT_SEED", "42")

from weakslit.main import main  # noqa: E402
from weakslit.schemas.bars import PriceBar  # noqa: E402
from weakslit.schemas.market import MarketParams  # noqa: E402

HEADER = "timestamp,open,high,low,close,volume"
DAY = 86_400
START = 1_700_000_000


@pytest.fixture
def market_params() -> MarketParams:
    """r = 0.05, sigma = 0.2, T = 1."""
    return MarketParams(r=0.05, sigma=0.2, T=1.0)


def make_bars(volumes: Sequence[float], price: float = 100.0) -> List[PriceBar]:
    """Daily bars with a flat close, a 1% range and the given volumes."""
    return [
        PriceBar(
            timestamp=START + k * DAY,
            open=price,
            high=price * 1.01,
            low=price * 0.99,
            close=price,
            volume=volume,
        )
        for k, volume in enumerate(volumes)
    ]


def bars_csv(bars: Sequence[PriceBar]) -> str:
    lines = [HEADER]
    lines += [
        f"{b.timestamp},{b.open!r},{b.high!r},{b.low!r},{b.close!r},{b.volume!r}" for b in bars
    ]
    return "\n".join(lines) + "\n"


@pytest.fixture
def write_csv(tmp_path: Path) -> Callable[[str, str], Path]:
    def write(text: str, name: str = "bars.csv") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write


@pytest.fixture
def spike_bars() -> List[PriceBar]:
    """30 quiet bars with one volume spike (5x) at index 25, wider range on the spike bar."""
    bars = make_bars([1000.0] * 30)
    spike = bars[25]
    bars[25] = PriceBar(
        timestamp=spike.timestamp,
        open=101.0,
        high=110.0,
        low=95.0,
        close=108.0,
        volume=5000.0,
    )
    return bars


@pytest.fixture
def run_cli(tmp_path: Path) -> Callable[..., "CliResult"]:
    """Run the CLI writing to a file under tmp_path; returns exit code and output."""
    counter = {"n": 0}

    def run(*argv: str, out: bool = True) -> CliResult:
        counter["n"] += 1
        path = tmp_path / f"out_{counter['n']}"
        args = list(argv) + (["--out", str(path)] if out else [])
        code = main(args)
        text = path.read_text(encoding="utf-8") if path.exists() else ""
        return CliResult(code=code, text=text)

    return run


class CliResult:
    def __init__(self, code: int, text: str):
        self.code = code
        self.text = text

    @property
    def rows(self) -> List[Dict[str, str]]:
        return list(csv.DictReader(self.text.splitlines()))


@pytest.fixture
def bar_factory() -> Callable[..., List[PriceBar]]:
    return make_bars


@pytest.fixture
def csv_text() -> Callable[[Sequence[PriceBar]], str]:
    return bars_csv
