"""
Kernel validation: the closed-form kernel against the Crank-Nicolson solver and
against Monte Carlo, plus the non-unitarity diagnostics of the evolution.
"""
import logging
import math
from typing import Dict, List, Optional, Tuple

import numpy as np

from weakslit.core.config import settings
from weakslit.oracles.monte_carlo import chi_square_against_kernel, mc_kernel_density
from weakslit.oracles.pde import (
    evolve_history,
    gaussian_field,
    gaussian_kernel_image,
    hamiltonian_split,
    non_hermiticity,
    norm_flow,
)
from weakslit.schemas.market import MarketParams
from weakslit.schemas.oracles import Field, Grid, KernelValidationReport

logger = logging.getLogger(__name__)

DEFAULT_GRID = Grid(x_min=-3.0, x_max=3.0, n=4000)


def _pde_error(grid: Grid, params: MarketParams, tau: float, n_time_steps: int,
               initial_sd: float, record_every: Optional[int] = None) -> Tuple[float, List[Field]]:
    psi0 = gaussian_field(grid, 0.0, initial_sd)
    history = evolve_history(psi0, tau, params, n_time_steps, record_every)
    exact = gaussian_kernel_image(grid, 0.0, initial_sd, tau, params)
    error = float(np.max(np.abs(history[-1].values - exact.values))) / exact.peak
    return error, history


def validate_kernel(
    params: MarketParams,
    tau: float = 1.0,
    grid: Optional[Grid] = None,
    n_time_steps: int = 2000,
    initial_sd: float = 0.05,
    n_paths: int = 10_000_000,
    bins: int = 50,
    seed: Optional[int] = None,
    refine: bool = True,
) -> KernelValidationReport:
    """
    Run every kernel oracle and collect metrics and the names of those out of tolerance.

    Metrics: relative L-infinity PDE error, its ratio under grid/step doubling,
    mass ratio against exp(-r tau), L2 monotonicity, exactness of the
    symmetric/antisymmetric split, and the chi-square test of a Monte Carlo
    histogram.
    """
    grid = grid or DEFAULT_GRID
    seed = settings.WEAKSLIT_SEED if seed is None else seed
    metrics: Dict[str, float] = {}
    failures: List[str] = []

    error, history = _pde_error(
        grid, params, tau, n_time_steps, initial_sd, record_every=max(1, n_time_steps // 10)
    )
    metrics["pde_linf_rel"] = error
    if not error <= settings.PDE_TOLERANCE:
        failures.append("pde_linf_rel")

    if refine:
        refined_error, _ = _pde_error(grid.refined(), params, tau, 2 * n_time_steps, initial_sd)
        ratio = error / refined_error if refined_error > 0 else math.inf
        metrics["pde_convergence_ratio"] = ratio
        low, high = settings.PDE_RATIO_RANGE
        if not low <= ratio <= high:
            failures.append("pde_convergence_ratio")

    flow = norm_flow(history)
    mass_ratio = flow[-1].mass / flow[0].mass
    metrics["mass_ratio"] = mass_ratio
    metrics["mass_ratio_error"] = abs(mass_ratio - math.exp(-params.r * tau))
    if not metrics["mass_ratio_error"] <= settings.MASS_TOLERANCE:
        failures.append("mass_ratio_error")

    l2 = np.array([sample.l2 for sample in flow])
    metrics["l2_decreasing"] = float(np.all(np.diff(l2) < 0))
    if params.r >= 0 and not metrics["l2_decreasing"]:
        failures.append("l2_decreasing")

    hermitian, anti_hermitian = hamiltonian_split(grid, params)
    metrics["hermitian_asymmetry"] = float(abs(hermitian - hermitian.T).max())
    metrics["anti_hermitian_symmetry"] = float(abs(anti_hermitian + anti_hermitian.T).max())
    metrics["non_hermiticity"] = non_hermiticity(grid, params)
    for name in ("hermitian_asymmetry", "anti_hermitian_symmetry"):
        if metrics[name] != 0.0:
            failures.append(name)

    density = mc_kernel_density(0.0, tau, params, n_paths, bins, seed)
    statistic, p_value = chi_square_against_kernel(density, params)
    metrics["chi2_statistic"] = statistic
    metrics["chi2_p_value"] = p_value
    metrics["mc_mass"] = density.mass
    if not p_value > settings.CHI2_ALPHA:
        failures.append("chi2_p_value")

    for name, value in metrics.items():
        logger.info(f"validate_kernel {name}={value}")
    if failures:
        logger.info(f"validate_kernel failures: {', '.join(failures)}")
    return KernelValidationReport(metrics=metrics, failures=failures)
