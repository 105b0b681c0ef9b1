"""
Records exchanged with the verification engines.
"""
import math
from typing import Dict, List

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator


class GbmParams(BaseModel):
    """Geometric Brownian motion dS/dt = phi S + sigma S R(t), simulated in log space."""
    model_config = ConfigDict(frozen=True)

    S0: float
    phi: float
    sigma: float
    dt: float
    steps: int = 1
    seed: int = 0

    @model_validator(mode="after")
    def _check(self) -> "GbmParams":
        if not all(math.isfinite(v) for v in (self.S0, self.phi, self.sigma, self.dt)):
            raise ValueError("GBM parameters must be finite")
        if self.S0 <= 0:
            raise ValueError("S0 must be positive")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.steps < 1:
            raise ValueError("steps must be at least 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        return self


class Grid(BaseModel):
    """Uniform grid of ``n`` interior nodes strictly inside (x_min, x_max)."""
    model_config = ConfigDict(frozen=True)

    x_min: float
    x_max: float
    n: int

    @model_validator(mode="after")
    def _check(self) -> "Grid":
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)):
            raise ValueError("grid bounds must be finite")
        if self.x_min >= self.x_max:
            raise ValueError("x_min must be below x_max")
        if self.n < 16:
            raise ValueError("grid needs at least 16 interior points")
        return self

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n + 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.x_min + self.h * np.arange(1, self.n + 1)

    def refined(self) -> "Grid":
        return Grid(x_min=self.x_min, x_max=self.x_max, n=2 * self.n)


class Field(BaseModel):
    """Discretised psi on the interior nodes of a grid; boundaries are zero."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: Grid
    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def _as_array(cls, values) -> np.ndarray:
        array = np.array(values, dtype=float)
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def _check(self) -> "Field":
        if self.values.shape != (self.grid.n,):
            raise ValueError(f"field has shape {self.values.shape}, grid needs ({self.grid.n},)")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite")
        return self

    @property
    def peak(self) -> float:
        return float(np.max(np.abs(self.values)))


class MonteCarloEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    estimate: float
    standard_error: float
    n_paths: int


class KernelDensity(BaseModel):
    """Histogram of simulated log-prices scaled by the discount factor."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x_prime: float
    tau: float
    edges: np.ndarray
    counts: np.ndarray
    density: np.ndarray
    n_paths: int

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @property
    def mass(self) -> float:
        return float(np.sum(self.density * np.diff(self.edges)))


class NormSample(BaseModel):
    model_config = ConfigDict(frozen=True)

    mass: float
    l2: float


class KernelValidationReport(BaseModel):
    """Outcome of every oracle comparison run by ``validate_kernel``."""
    model_config = ConfigDict(frozen=True)

    metrics: Dict[str, float]
    failures: List[str]

    @property
    def passed(self) -> bool:
        return not self.failures
