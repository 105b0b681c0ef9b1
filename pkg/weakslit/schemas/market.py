import math
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class MarketParams(BaseModel):
    """Black-Scholes triple: spot rate, volatility and horizon in one time unit."""
    model_config = ConfigDict(frozen=True)

    r: float
    sigma: float = Field(gt=0)
    T: float = Field(gt=0)

    @field_validator("r", "sigma", "T")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("must be finite")
        return value

    @property
    def log_drift(self) -> float:
        """Risk-neutral drift of the log-price, r - sigma^2/2."""
        return self.r - 0.5 * self.sigma ** 2


class LogPriceFrame(BaseModel):
    """Reference shift c: centered log-price x = ln(S) - c."""
    model_config = ConfigDict(frozen=True)

    c: float = 0.0

    @field_validator("c")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("shift must be finite")
        return value


class SlitSide(str, Enum):
    pre = "pre"
    post = "post"


class SlitConfig(BaseModel):
    """
    Superposition of admissible centered log-prices on one side of the evolution.

    ``side == pre`` puts the slits at t = 0 and ``endpoint`` is the final price;
    ``side == post`` puts the slits at t = T and ``endpoint`` is the initial price.
    """
    model_config = ConfigDict(frozen=True)

    positions: List[float] = Field(min_length=1)
    endpoint: float
    side: SlitSide = SlitSide.pre
    weights: Optional[List[float]] = None

    @model_validator(mode="before")
    @classmethod
    def _default_weights(cls, data):
        if isinstance(data, dict) and data.get("weights") is None and data.get("positions"):
            data = {**data, "weights": [1.0] * len(data["positions"])}
        return data

    @model_validator(mode="after")
    def _check(self) -> "SlitConfig":
        if not all(math.isfinite(p) for p in self.positions) or not math.isfinite(self.endpoint):
            raise ValueError("slit positions and endpoint must be finite")
        if len(self.weights) != len(self.positions):
            raise ValueError("weights must have the same length as positions")
        if any(w < 0 or not math.isfinite(w) for w in self.weights):
            raise ValueError("weights must be finite and nonnegative")
        if not any(w > 0 for w in self.weights):
            raise ValueError("at least one weight must be positive")
        return self

    def symmetric_half_separation(self) -> Optional[float]:
        """Half-separation when the slits are an equal-weight pair at +-a, else None."""
        if len(self.positions) != 2:
            return None
        a, b = self.positions
        w_a, w_b = self.weights
        if a != -b or a == b or w_a != w_b or w_a <= 0:
            return None
        return abs(a)


class WeakTrajectorySample(BaseModel):
    """One point of a weak trajectory with its classical envelope."""
    model_config = ConfigDict(frozen=True)

    t: float
    tau: float
    T: float = Field(gt=0)
    x_w: float
    band_low: float
    band_high: float

    @model_validator(mode="after")
    def _check_times(self) -> "WeakTrajectorySample":
        if not 0.0 <= self.t <= self.T:
            raise ValueError(f"t={self.t} outside [0, {self.T}]")
        if self.tau != self.T - self.t:
            raise ValueError(f"tau={self.tau} differs from T - t={self.T - self.t}")
        if self.band_low > self.band_high:
            raise ValueError("band_low exceeds band_high")
        if not self.band_low <= self.x_w <= self.band_high:
            raise ValueError(f"x_w={self.x_w} outside the classical band [{self.band_low}, {self.band_high}]")
        return self


class TrajectoryRequest(BaseModel):
    model_config = ConfigDict(frozen=True)

    slits: SlitConfig
    params: MarketParams
    frame: LogPriceFrame = LogPriceFrame()
    steps: int = Field(default=101, ge=2)

    @field_validator("slits")
    @classmethod
    def _distinct(cls, slits: SlitConfig) -> SlitConfig:
        if len(set(slits.positions)) != len(slits.positions):
            raise ValueError("slit positions must be distinct")
        return slits
