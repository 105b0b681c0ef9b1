from typing import NamedTuple

from pydantic import BaseModel, ConfigDict, Field


class QmParams(BaseModel):
    """Free-particle double slit in natural units by default."""
    model_config = ConfigDict(frozen=True)

    m: float = Field(default=1.0, gt=0)
    hbar: float = Field(default=1.0, gt=0)
    T: float = Field(default=1.0, gt=0)
    x_i: float = Field(default=1.0, ge=0)
    d: float = Field(default=1.0, gt=0)


class WeakPosition(NamedTuple):
    """Complex weak position; ``divergent`` marks a destructive-interference pole."""
    value: complex
    divergent: bool
