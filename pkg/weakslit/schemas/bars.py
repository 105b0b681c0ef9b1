import math
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class PriceBar(BaseModel):
    model_config = ConfigDict(frozen=True)

    timestamp: int
    open: float = Field(gt=0)
    high: float = Field(gt=0)
    low: float = Field(gt=0)
    close: float = Field(gt=0)
    volume: float = Field(ge=0)

    @model_validator(mode="after")
    def _check_ohlc(self) -> "PriceBar":
        values = (self.open, self.high, self.low, self.close, self.volume)
        if not all(math.isfinite(v) for v in values):
            raise ValueError("prices and volume must be finite")
        if not self.low <= min(self.open, self.close) <= max(self.open, self.close) <= self.high:
            raise ValueError(
                f"OHLC invariant violated: low={self.low} open={self.open} "
                f"close={self.close} high={self.high}"
            )
        return self


class IntervalEvent(BaseModel):
    """
    A high-relative-volume window reduced to a double slit.

    O1 and O2 are the extreme log-prices of the window; in the frame with
    shift c the slits sit at +-x_i.
    """
    model_config = ConfigDict(frozen=True)

    t_start: int
    t_end: int
    t_mean: float
    O1: float
    O2: float
    c: float
    x_i: float = Field(ge=0)
    peak_rvol: float

    @model_validator(mode="after")
    def _check(self) -> "IntervalEvent":
        if self.O1 < self.O2:
            raise ValueError("O1 must not be below O2")
        if not self.t_start <= self.t_mean <= self.t_end:
            raise ValueError("t_mean must lie inside [t_start, t_end]")
        return self


class ScenarioSet(BaseModel):
    """Future scenarios as (probability, return) pairs."""
    model_config = ConfigDict(frozen=True)

    scenarios: List[Tuple[float, float]] = Field(min_length=1)

    @field_validator("scenarios")
    @classmethod
    def _check(cls, scenarios: List[Tuple[float, float]]) -> List[Tuple[float, float]]:
        if any(p < 0 or not math.isfinite(p) or not math.isfinite(R) for p, R in scenarios):
            raise ValueError("probabilities must be nonnegative and all values finite")
        total = math.fsum(p for p, _ in scenarios)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {total}, expected 1")
        return scenarios

    @property
    def probabilities(self) -> List[float]:
        return [p for p, _ in self.scenarios]

    @property
    def returns(self) -> List[float]:
        return [R for _, R in self.scenarios]
