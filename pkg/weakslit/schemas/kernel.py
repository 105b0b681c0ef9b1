import math
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, field_validator


class OptionKind(str, Enum):
    call = "call"
    put = "put"


class Payoff(BaseModel):
    """European payoff g(S) at maturity."""
    model_config = ConfigDict(frozen=True)

    kind: OptionKind
    strike: float = Field(gt=0)

    @field_validator("strike")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("strike must be finite")
        return value
