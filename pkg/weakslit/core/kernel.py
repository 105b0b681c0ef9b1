"""
Black-Scholes pricing kernel, generic kernels A*exp(f) and kernel-based option pricing.
"""
import logging
import math
from abc import ABC, abstractmethod
from typing import Callable, Optional, Tuple, Union

import numpy as np
from scipy.stats import norm

from weakslit.core.config import settings
from weakslit.core.errors import DomainError
from weakslit.schemas.kernel import OptionKind, Payoff
from weakslit.schemas.market import LogPriceFrame, MarketParams
from weakslit.utils.quadrature import integrate

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def _require_positive_time(value: float, name: str) -> None:
    if not value > 0:
        raise DomainError(
            detail=f"{name} must be positive, got {value}",
            params={name: value},
        )


def kernel_gaussian(params: MarketParams, tau: float, x_prime: float) -> Tuple[float, float]:
    """Mean and standard deviation of the kernel viewed as a density in x."""
    _require_positive_time(tau, "tau")
    return x_prime - tau * params.log_drift, params.sigma * math.sqrt(tau)


def bs_kernel(x: ArrayLike, tau: float, x_prime: ArrayLike, params: MarketParams) -> ArrayLike:
    """
    p(x, tau; x') = exp(-r tau) (2 pi tau sigma^2)^(-1/2)
                    exp(-(x - x' + tau (r - sigma^2/2))^2 / (2 tau sigma^2))

    The tau -> 0 delta limit is not evaluated pointwise.
    """
    _require_positive_time(tau, "tau")
    loc = np.asarray(x_prime, dtype=float) - tau * params.log_drift
    value = math.exp(-params.r * tau) * norm.pdf(x, loc=loc, scale=params.sigma * math.sqrt(tau))
    return float(value) if np.ndim(value) == 0 else value


def bs_exponent_f(x_i: ArrayLike, x_f: ArrayLike, T: float, params: MarketParams) -> ArrayLike:
    """Exponent of the kernel amplitude <x_i|U(T)|x_f>."""
    _require_positive_time(T, "T")
    x_i = np.asarray(x_i, dtype=float)
    x_f = np.asarray(x_f, dtype=float)
    value = -((x_i - x_f + T * params.log_drift) ** 2) / (2.0 * T * params.sigma ** 2)
    return float(value) if np.ndim(value) == 0 else value


class GenericKernel(ABC):
    """Kernel amplitude <x_i|U(T)|x_f> = A(T) exp(f(x_i, x_f, T))."""

    @abstractmethod
    def log_amplitude(self, T: float) -> float:
        ...

    @abstractmethod
    def exponent(self, x_i: ArrayLike, x_f: ArrayLike, T: float) -> ArrayLike:
        ...

    def amplitude(self, T: float) -> float:
        return math.exp(self.log_amplitude(T))

    def log_value(self, x_i: ArrayLike, x_f: ArrayLike, T: float) -> ArrayLike:
        return self.log_amplitude(T) + self.exponent(x_i, x_f, T)


class BsKernel(GenericKernel):
    """The Black-Scholes kernel in amplitude/exponent form."""

    def __init__(self, params: MarketParams):
        self.params = params

    def log_amplitude(self, T: float) -> float:
        _require_positive_time(T, "T")
        return -self.params.r * T - 0.5 * math.log(2.0 * math.pi * T * self.params.sigma ** 2)

    def exponent(self, x_i: ArrayLike, x_f: ArrayLike, T: float) -> ArrayLike:
        return bs_exponent_f(x_i, x_f, T, self.params)

    def __repr__(self) -> str:
        return f"BsKernel(r={self.params.r}, sigma={self.params.sigma})"


class FunctionKernel(GenericKernel):
    """Kernel assembled from a user exponent f(x_i, x_f, T) and amplitude A (constant or A(T))."""

    def __init__(
        self,
        exponent: Callable[[ArrayLike, ArrayLike, float], ArrayLike],
        amplitude: Union[float, Callable[[float], float]] = 1.0,
    ):
        self._exponent = exponent
        self._amplitude = amplitude

    def log_amplitude(self, T: float) -> float:
        A = self._amplitude(T) if callable(self._amplitude) else self._amplitude
        if not A > 0:
            raise DomainError(detail=f"Kernel amplitude must be positive, got {A}")
        return math.log(A)

    def exponent(self, x_i: ArrayLike, x_f: ArrayLike, T: float) -> ArrayLike:
        return self._exponent(x_i, x_f, T)


def f_odd(kernel: GenericKernel, x_i: ArrayLike, x_f: ArrayLike, T: float) -> ArrayLike:
    """Part of the exponent odd in the initial price: (f(x_i, x_f) - f(-x_i, x_f)) / 2."""
    x_i = np.asarray(x_i, dtype=float)
    value = 0.5 * (kernel.exponent(x_i, x_f, T) - kernel.exponent(-x_i, x_f, T))
    return float(value) if np.ndim(value) == 0 else value


def f_odd_final(kernel: GenericKernel, x_i: ArrayLike, x_f: ArrayLike, T: float) -> ArrayLike:
    """Part of the exponent odd in the final price: (f(x_i, x_f) - f(x_i, -x_f)) / 2."""
    x_f = np.asarray(x_f, dtype=float)
    value = 0.5 * (kernel.exponent(x_i, x_f, T) - kernel.exponent(x_i, -x_f, T))
    return float(value) if np.ndim(value) == 0 else value


def payoff_value(payoff: Payoff, S: ArrayLike) -> ArrayLike:
    S = np.asarray(S, dtype=float)
    if payoff.kind == OptionKind.call:
        value = np.maximum(S - payoff.strike, 0.0)
    else:
        value = np.maximum(payoff.strike - S, 0.0)
    return float(value) if value.ndim == 0 else value


def price_option(
    payoff: Payoff,
    params: MarketParams,
    tau: float,
    x: float,
    frame: Optional[LogPriceFrame] = None,
    *,
    rtol: Optional[float] = None,
) -> float:
    """
    Value at backward time tau: integral of p(x, tau; x') g(exp(x' + c)) dx'.

    The integration range is the kernel mean +- QUADRATURE_SIGMAS standard
    deviations, split at the strike so the payoff kink falls on a panel edge.
    """
    frame = frame or LogPriceFrame()
    _require_positive_time(tau, "tau")
    mean = x + tau * params.log_drift
    sd = params.sigma * math.sqrt(tau)
    width = settings.QUADRATURE_SIGMAS * sd
    kink = math.log(payoff.strike) - frame.c

    def integrand(x_prime: np.ndarray) -> np.ndarray:
        return bs_kernel(x, tau, x_prime, params) * payoff_value(payoff, np.exp(x_prime + frame.c))

    result = integrate(integrand, mean - width, mean + width, breakpoints=(kink,), rtol=rtol)
    logger.debug(f"price_option {payoff.kind.value} K={payoff.strike}: {result.value} ({result.panels} panels)")
    return result.value


def parity_gap(call_value: float, put_value: float, S: float, K: float, r: float, tau: float) -> float:
    """C + K exp(-r tau) - P - S; zero for arbitrage-free prices."""
    return call_value + K * math.exp(-r * tau) - put_value - S
