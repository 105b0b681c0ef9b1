"""Price <-> centered log-price convention x = ln(S) - c."""
from typing import Union

import numpy as np

from weakslit.core.errors import DomainError
from weakslit.schemas.market import LogPriceFrame

ArrayLike = Union[float, np.ndarray]


def to_centered(S: ArrayLike, frame: LogPriceFrame) -> ArrayLike:
    prices = np.asarray(S, dtype=float)
    if np.any(~(prices > 0)) or np.any(~np.isfinite(prices)):
        raise DomainError(
            detail="Prices must be positive and finite",
            params={"S": prices.tolist()},
        )
    x = np.log(prices) - frame.c
    return float(x) if x.ndim == 0 else x


def from_centered(x: ArrayLike, frame: LogPriceFrame) -> ArrayLike:
    S = np.exp(np.asarray(x, dtype=float) + frame.c)
    return float(S) if S.ndim == 0 else S


def midpoint_frame(log_high: float, log_low: float) -> LogPriceFrame:
    """Frame whose origin is the midpoint of two extreme log-prices."""
    return LogPriceFrame(c=0.5 * (log_high + log_low))
