"""
Crank-Nicolson evolution of the Black-Scholes Hamiltonian in centered log-price.

    d psi / d tau = -H psi,   H = -(sigma^2/2) d^2/dx^2 + (sigma^2/2 - r) d/dx + r

H splits into a symmetric part (diffusion plus discount) and an antisymmetric
part (drift). Grids carry zero Dirichlet boundaries; only interior nodes are
stored.
"""
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse
from scipy.integrate import trapezoid
from scipy.sparse.linalg import factorized
from scipy.sparse.linalg import norm as sparse_norm
from scipy.stats import norm

from weakslit.core.config import settings
from weakslit.core.errors import DomainError, NumericalError
from weakslit.core.kernel import kernel_gaussian
from weakslit.schemas.market import MarketParams
from weakslit.schemas.oracles import Field, Grid, NormSample

logger = logging.getLogger(__name__)


def gaussian_field(grid: Grid, mean: float, sd: float) -> Field:
    if not sd > 0:
        raise DomainError(detail=f"sd must be positive, got {sd}")
    return Field(grid=grid, values=norm.pdf(grid.nodes, loc=mean, scale=sd))


def gaussian_kernel_image(grid: Grid, mean: float, sd: float, tau: float, params: MarketParams) -> Field:
    """Closed-form kernel image of a normal density: shifted, widened and discounted."""
    if not sd > 0:
        raise DomainError(detail=f"sd must be positive, got {sd}")
    shift, kernel_sd = kernel_gaussian(params, tau, 0.0)
    values = math.exp(-params.r * tau) * norm.pdf(
        grid.nodes, loc=mean + shift, scale=math.hypot(sd, kernel_sd)
    )
    return Field(grid=grid, values=values)


def hamiltonian_split(grid: Grid, params: MarketParams) -> Tuple[sparse.csr_matrix, sparse.csr_matrix]:
    """Discretised (H^H, H^AH) with H^H symmetric and H^AH antisymmetric."""
    n, h = grid.n, grid.h
    diffusion = 0.5 * params.sigma ** 2
    drift = diffusion - params.r

    off = np.full(n - 1, -diffusion / h ** 2)
    main = np.full(n, 2.0 * diffusion / h ** 2 + params.r)
    hermitian = sparse.diags([off, main, off], [-1, 0, 1], format="csr")

    upper = np.full(n - 1, drift / (2.0 * h))
    anti_hermitian = sparse.diags([-upper, upper], [-1, 1], shape=(n, n), format="csr")
    return hermitian, anti_hermitian


def apply_hamiltonian(field: Field, params: MarketParams) -> np.ndarray:
    """H psi from the three-point stencils directly, zero outside the grid."""
    h = field.grid.h
    padded = np.concatenate(([0.0], field.values, [0.0]))
    second = (padded[2:] - 2.0 * padded[1:-1] + padded[:-2]) / h ** 2
    first = (padded[2:] - padded[:-2]) / (2.0 * h)
    diffusion = 0.5 * params.sigma ** 2
    return -diffusion * second + (diffusion - params.r) * first + params.r * field.values


def non_hermiticity(grid: Grid, params: MarketParams) -> float:
    """Frobenius norm of the drift part; zero exactly when sigma^2/2 = r."""
    _, anti_hermitian = hamiltonian_split(grid, params)
    return float(sparse_norm(anti_hermitian))


def _boundary_ratio(field: Field) -> float:
    peak = field.peak
    if peak == 0.0:
        return 0.0
    return max(abs(field.values[0]), abs(field.values[-1])) / peak


def _check_boundary(field: Field, label: str) -> None:
    ratio = _boundary_ratio(field)
    if ratio > settings.BOUNDARY_WARN_RATIO:
        logger.warning(
            f"{label}: boundary value is {ratio:.3e} of the peak on "
            f"[{field.grid.x_min}, {field.grid.x_max}]; widen the grid"
        )


def evolve_history(
    psi0: Field,
    tau_total: float,
    params: MarketParams,
    n_time_steps: int,
    record_every: Optional[int] = None,
) -> List[Field]:
    """
    Crank-Nicolson snapshots of psi, starting with psi0 and ending at tau_total.

    Snapshots are taken every ``record_every`` steps (default: only the ends).
    """
    if not tau_total > 0:
        raise DomainError(detail=f"tau_total must be positive, got {tau_total}")
    if n_time_steps < 1:
        raise DomainError(detail=f"need at least one time step, got {n_time_steps}")
    record_every = record_every or n_time_steps
    grid = psi0.grid
    _check_boundary(psi0, "initial field")

    dt = tau_total / n_time_steps
    hermitian, anti_hermitian = hamiltonian_split(grid, params)
    H = (hermitian + anti_hermitian).tocsc()
    identity = sparse.identity(grid.n, format="csc")
    explicit = (identity - 0.5 * dt * H).tocsr()
    try:
        solve = factorized((identity + 0.5 * dt * H).tocsc())
    except RuntimeError as exc:
        raise NumericalError(
            detail=f"Crank-Nicolson matrix factorisation failed: {exc}",
            code="TRIDIAGONAL_SOLVE_FAILED",
            params={"n": grid.n, "dt": dt},
        ) from exc

    psi = np.array(psi0.values)
    history = [psi0]
    for step in range(1, n_time_steps + 1):
        psi = solve(explicit @ psi)
        if step % record_every == 0 or step == n_time_steps:
            if not np.all(np.isfinite(psi)):
                raise NumericalError(
                    detail="Crank-Nicolson solution became non-finite",
                    code="TRIDIAGONAL_SOLVE_FAILED",
                    params={"step": step, "dt": dt},
                )
            history.append(Field(grid=grid, values=psi))

    _check_boundary(history[-1], "evolved field")
    logger.info(f"Crank-Nicolson: n={grid.n}, steps={n_time_steps}, tau={tau_total}")
    return history


def crank_nicolson_evolve(
    psi0: Field,
    tau_total: float,
    params: MarketParams,
    grid: Optional[Grid] = None,
    n_time_steps: int = 2000,
) -> Field:
    if grid is not None and grid != psi0.grid:
        raise DomainError(detail="psi0 is not defined on the requested grid")
    return evolve_history(psi0, tau_total, params, n_time_steps)[-1]


def norm_flow(fields: Sequence[Field], grid: Optional[Grid] = None) -> List[NormSample]:
    """Trapezoid mass and squared L2 norm of each snapshot, boundaries included as zeros."""
    if len(fields) < 2:
        raise DomainError(detail=f"norm flow needs at least 2 snapshots, got {len(fields)}")
    grid = grid or fields[0].grid
    x = np.concatenate(([grid.x_min], grid.nodes, [grid.x_max]))
    samples = []
    for field in fields:
        if field.grid != grid:
            raise DomainError(detail="all snapshots must share one grid")
        values = np.concatenate(([0.0], field.values, [0.0]))
        samples.append(
            NormSample(mass=float(trapezoid(values, x)), l2=float(trapezoid(values ** 2, x)))
        )
    return samples
