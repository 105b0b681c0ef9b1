"""
Weak-value trajectories of option prices.

Forward problems put the slits at t = 0 (pre-selected prices) and a single
price at t = T; inverse problems put the slits at t = T. Backward time
tau = T - t runs from T at the start to 0 at maturity. Every closed form is
written so the term that vanishes at an endpoint is an exact multiply-by-zero.
"""
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import softmax

from weakslit.core.errors import DegenerateDenominatorError, DomainError
from weakslit.core.kernel import BsKernel, GenericKernel, f_odd, f_odd_final
from weakslit.schemas.market import (
    MarketParams,
    SlitConfig,
    SlitSide,
    TrajectoryRequest,
    WeakTrajectorySample,
)

logger = logging.getLogger(__name__)


def _time_fraction(tau: float, T: float) -> float:
    if not T > 0:
        raise DomainError(detail=f"T must be positive, got {T}", params={"T": T})
    if not 0.0 <= tau <= T:
        raise DomainError(
            detail=f"tau={tau} outside [0, {T}]",
            params={"tau": tau, "T": T},
        )
    return tau / T


def _require_nonnegative(value: float, name: str) -> None:
    if not value >= 0:
        raise DomainError(detail=f"{name} must be nonnegative, got {value}", params={name: value})


def forward_two_slit(x_i: float, x_f: float, tau: float, T: float, params: MarketParams) -> float:
    """Slits at +-x_i at t = 0, single final price x_f at t = T."""
    _require_nonnegative(x_i, "x_i")
    s = _time_fraction(tau, T)
    argument = (x_i / (T * params.sigma ** 2)) * (x_f - T * params.log_drift)
    return x_f * (1.0 - s) + (x_i * s) * math.tanh(argument)


def forward_initial(x_i: float, x_f: float, T: float, params: MarketParams) -> float:
    """Weak price at t = 0 of the forward double slit; always strictly inside (-x_i, x_i)."""
    if not T > 0:
        raise DomainError(detail=f"T must be positive, got {T}", params={"T": T})
    argument = (x_i / (T * params.sigma ** 2)) * (x_f - T * params.log_drift)
    return x_i * math.tanh(argument)


def inverse_two_slit(x_i: float, x_f: float, tau: float, T: float, params: MarketParams) -> float:
    """Single initial price x_i at t = 0, slits at +-x_f at t = T."""
    _require_nonnegative(x_f, "x_f")
    s = _time_fraction(tau, T)
    argument = (x_f / (T * params.sigma ** 2)) * (x_i + T * params.log_drift)
    return x_i * s + (x_f * (1.0 - s)) * math.tanh(argument)


def generic_two_slit(kernel: GenericKernel, x_i: float, x_f: float, tau: float, T: float) -> float:
    s = _time_fraction(tau, T)
    return x_f * (1.0 - s) + (x_i * s) * math.tanh(f_odd(kernel, x_i, x_f, T))


def generic_inverse_two_slit(kernel: GenericKernel, x_i: float, x_f: float, tau: float, T: float) -> float:
    s = _time_fraction(tau, T)
    return x_i * s + (x_f * (1.0 - s)) * math.tanh(f_odd_final(kernel, x_i, x_f, T))


def classical_paths(slits: SlitConfig, endpoint: float, tau: float, T: float) -> np.ndarray:
    """Straight paths joining every slit with the opposite endpoint, evaluated at tau."""
    s = _time_fraction(tau, T)
    positions = np.asarray(slits.positions, dtype=float)
    if slits.side == SlitSide.pre:
        return endpoint * (1.0 - s) + positions * s
    return endpoint * s + positions * (1.0 - s)


def classical_envelope(
    slits: SlitConfig, endpoint: Optional[float], tau: float, T: float
) -> Tuple[float, float]:
    endpoint = slits.endpoint if endpoint is None else endpoint
    paths = classical_paths(slits, endpoint, tau, T)
    return float(paths.min()), float(paths.max())


def _weighted_mean(log_weights: np.ndarray, paths: np.ndarray) -> float:
    if not np.isfinite(np.max(log_weights)):
        raise DegenerateDenominatorError(
            params={"log_weights": log_weights.tolist()},
        )
    p = softmax(log_weights)
    # Convex combination; clipping absorbs summation rounding.
    return float(np.clip(p @ paths, paths.min(), paths.max()))


def _log(weights: Sequence[float]) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(np.asarray(weights, dtype=float))


def n_slit_weak(slits: SlitConfig, tau: float, T: float, kernel: GenericKernel) -> float:
    """
    Kernel-weighted average of the classical paths of every slit.

    Amplitudes are combined in log space so large negative exponents do not
    underflow before normalisation.
    """
    positions = np.asarray(slits.positions, dtype=float)
    if slits.side == SlitSide.pre:
        log_amplitudes = kernel.log_value(positions, slits.endpoint, T)
    else:
        log_amplitudes = kernel.log_value(slits.endpoint, positions, T)
    log_weights = _log(slits.weights) + np.broadcast_to(log_amplitudes, positions.shape)
    paths = classical_paths(slits, slits.endpoint, tau, T)
    return _weighted_mean(log_weights, paths)


def multi_slit_weak(
    initial: Sequence[float],
    final: Sequence[float],
    tau: float,
    T: float,
    kernel: GenericKernel,
    initial_weights: Optional[Sequence[float]] = None,
    final_weights: Optional[Sequence[float]] = None,
) -> float:
    """Several initial prices connected with several final prices."""
    s = _time_fraction(tau, T)
    a = np.asarray(initial, dtype=float)[:, None]
    b = np.asarray(final, dtype=float)[None, :]
    if a.size == 0 or b.size == 0:
        raise DomainError(detail="Both sides need at least one price")
    w = _log(initial_weights if initial_weights is not None else [1.0] * a.shape[0])[:, None]
    v = _log(final_weights if final_weights is not None else [1.0] * b.shape[1])[None, :]
    log_weights = w + v + kernel.log_value(a, b, T)
    paths = b * (1.0 - s) + a * s
    return _weighted_mean(log_weights.ravel(), np.broadcast_to(paths, log_weights.shape).ravel())


def weak_price(slits: SlitConfig, tau: float, T: float, params: MarketParams) -> float:
    """
    Weak price under the Black-Scholes kernel.

    An equal-weight pair at +-a reduces to the closed forms; anything else
    goes through the kernel-weighted ratio.
    """
    half = slits.symmetric_half_separation()
    if half is not None:
        if slits.side == SlitSide.pre:
            return forward_two_slit(half, slits.endpoint, tau, T, params)
        return inverse_two_slit(slits.endpoint, half, tau, T, params)
    return n_slit_weak(slits, tau, T, BsKernel(params))


def sample_trajectory(request: TrajectoryRequest) -> List[WeakTrajectorySample]:
    T = request.params.T
    samples = []
    for t in np.linspace(0.0, T, request.steps):
        t = float(t)
        tau = T - t
        low, high = classical_envelope(request.slits, None, tau, T)
        samples.append(
            WeakTrajectorySample(
                t=t,
                tau=tau,
                T=T,
                x_w=weak_price(request.slits, tau, T, request.params),
                band_low=low,
                band_high=high,
            )
        )
    logger.info(f"Sampled {len(samples)} weak-trajectory points over [0, {T}]")
    return samples
