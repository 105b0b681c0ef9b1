"""
Geometric Brownian motion Monte Carlo.

Log-price increments are exact for GBM: x_{k+1} = x_k + (phi - sigma^2/2) dt
+ sigma sqrt(dt) Z_k. Generators are numpy PCG64 seeded through SeedSequence;
batched runs spawn one child stream per batch and merge results by batch index.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Tuple, TypeVar

import numpy as np
from scipy.stats import chisquare, norm

from weakslit.core.config import settings
from weakslit.core.errors import DomainError
from weakslit.core.kernel import kernel_gaussian
from weakslit.schemas.market import MarketParams
from weakslit.schemas.oracles import GbmParams, KernelDensity, MonteCarloEstimate

logger = logging.getLogger(__name__)

BatchResult = TypeVar("BatchResult")


def simulate_gbm(p: GbmParams) -> np.ndarray:
    """One price path S_0..S_steps; identical seeds give bit-identical paths."""
    rng = np.random.default_rng(p.seed)
    z = rng.standard_normal(p.steps)
    increments = (p.phi - 0.5 * p.sigma ** 2) * p.dt + p.sigma * math.sqrt(p.dt) * z
    x = math.log(p.S0) + np.concatenate(([0.0], np.cumsum(increments)))
    return np.exp(x)


def _batch_sizes(n_paths: int, batch_size: int) -> List[int]:
    full, rest = divmod(n_paths, batch_size)
    return [batch_size] * full + ([rest] if rest else [])


def run_batches(
    work: Callable[[np.random.Generator, int], BatchResult],
    n_paths: int,
    seed: int,
    batch_size: Optional[int] = None,
    workers: Optional[int] = None,
) -> List[BatchResult]:
    """Run ``work(rng, size)`` per batch on a thread pool; results come back in batch order."""
    sizes = _batch_sizes(n_paths, batch_size or settings.MC_BATCH_SIZE)
    children = np.random.SeedSequence(seed).spawn(len(sizes))

    def run(job: Tuple[np.random.SeedSequence, int]) -> BatchResult:
        child, size = job
        return work(np.random.default_rng(child), size)

    with ThreadPoolExecutor(max_workers=workers or settings.MC_WORKERS) as executor:
        return list(executor.map(run, zip(children, sizes)))


def _log_increments(rng: np.random.Generator, drift: float, sigma: float, dt: float,
                    steps: int, size: int) -> np.ndarray:
    x = np.zeros(size)
    scale = sigma * math.sqrt(dt)
    for _ in range(steps):
        x += drift * dt + scale * rng.standard_normal(size)
    return x


def martingale_check(p: GbmParams, r: float, t: float, n_paths: int) -> MonteCarloEstimate:
    """Monte Carlo estimate of E[exp(-r t) S(t)] - S(0) with its standard error."""
    if n_paths < 100:
        raise DomainError(detail=f"martingale check needs at least 100 paths, got {n_paths}")
    if not t > 0:
        raise DomainError(detail=f"t must be positive, got {t}")
    steps = max(1, int(round(t / p.dt)))
    dt = t / steps
    drift = p.phi - 0.5 * p.sigma ** 2
    discount = math.exp(-r * t)

    def work(rng: np.random.Generator, size: int) -> Tuple[int, float, float]:
        values = discount * p.S0 * np.exp(_log_increments(rng, drift, p.sigma, dt, steps, size))
        mean = float(values.mean())
        return size, mean, float(np.sum((values - mean) ** 2))

    # Chan et al. pairwise combination of batch means and squared deviations.
    count, mean, m2 = 0, 0.0, 0.0
    for size, batch_mean, batch_m2 in run_batches(work, n_paths, p.seed):
        delta = batch_mean - mean
        total = count + size
        mean += delta * size / total
        m2 += batch_m2 + delta ** 2 * count * size / total
        count = total

    standard_error = math.sqrt(m2 / (count - 1) / count)
    logger.info(f"martingale check: mean={mean}, S0={p.S0}, se={standard_error}")
    return MonteCarloEstimate(estimate=mean - p.S0, standard_error=standard_error, n_paths=count)


def mc_kernel_density(
    x_prime: float,
    tau: float,
    params: MarketParams,
    n_paths: int,
    bins: int,
    seed: int,
    width_sds: float = 4.0,
) -> KernelDensity:
    """
    Histogram of log-prices x that reach x' after a risk-neutral GBM step of length tau.

    Samples are x' minus the simulated log increment; bins span the kernel mean
    +- ``width_sds`` standard deviations and tail samples are counted in the end
    bins, so the scaled histogram carries mass exp(-r tau).
    """
    if bins < 10:
        raise DomainError(detail=f"need at least 10 bins, got {bins}")
    if n_paths < 1:
        raise DomainError(detail="need at least one path")
    mean, sd = kernel_gaussian(params, tau, x_prime)
    edges = np.linspace(mean - width_sds * sd, mean + width_sds * sd, bins + 1)

    def work(rng: np.random.Generator, size: int) -> np.ndarray:
        samples = x_prime - _log_increments(rng, params.log_drift, params.sigma, tau, 1, size)
        counts, _ = np.histogram(np.clip(samples, edges[0], edges[-1]), bins=edges)
        return counts

    counts = np.sum(run_batches(work, n_paths, seed), axis=0)
    density = math.exp(-params.r * tau) * counts / (n_paths * np.diff(edges))
    return KernelDensity(
        x_prime=x_prime,
        tau=tau,
        edges=edges,
        counts=counts,
        density=density,
        n_paths=n_paths,
    )


def chi_square_against_kernel(density: KernelDensity, params: MarketParams) -> Tuple[float, float]:
    """
    Chi-square statistic and p-value of the histogram against the kernel.

    Expected bin probabilities are exact integrals of the kernel over each bin
    divided by exp(-r tau); the end bins absorb the tails.
    """
    mean, sd = kernel_gaussian(params, density.tau, density.x_prime)
    cdf = norm.cdf(density.edges, loc=mean, scale=sd)
    cdf[0], cdf[-1] = 0.0, 1.0
    probabilities = np.diff(cdf)
    expected = density.n_paths * probabilities / probabilities.sum()
    statistic, p_value = chisquare(density.counts, expected)
    return float(statistic), float(p_value)
