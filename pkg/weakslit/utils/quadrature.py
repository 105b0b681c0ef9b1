"""
Composite Gauss-Legendre quadrature with panel doubling.
"""
import logging
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from weakslit.core.config import settings
from weakslit.core.errors import NumericalError

logger = logging.getLogger(__name__)


class QuadratureResult(NamedTuple):
    value: float
    panels: int
    change: float


def _composite(func: Callable[[np.ndarray], np.ndarray], edges: np.ndarray,
               nodes: np.ndarray, weights: np.ndarray) -> float:
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    points = mid[:, None] + half[:, None] * nodes[None, :]
    return float(np.sum(func(points) * weights[None, :] * half[:, None]))


def integrate(
    func: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    *,
    breakpoints: Sequence[float] = (),
    rtol: Optional[float] = None,
    atol: float = 1e-14,
    order: Optional[int] = None,
    initial_panels: int = 4,
    max_doublings: Optional[int] = None,
) -> QuadratureResult:
    """
    Integrate a vectorised ``func`` over [a, b].

    The interval is split at ``breakpoints`` (kinks of the integrand) and every
    piece is covered by equal panels; the panel count doubles until two
    successive estimates agree to ``rtol`` relative (``atol`` absolute floor).
    """
    rtol = settings.QUADRATURE_RTOL if rtol is None else rtol
    order = settings.QUADRATURE_NODES if order is None else order
    max_doublings = settings.QUADRATURE_MAX_DOUBLINGS if max_doublings is None else max_doublings

    cuts = sorted({a, b, *(p for p in breakpoints if a < p < b)})
    nodes, weights = np.polynomial.legendre.leggauss(order)

    def estimate(panels: int) -> float:
        edges = np.concatenate(
            [np.linspace(lo, hi, panels + 1)[:-1] for lo, hi in zip(cuts[:-1], cuts[1:])]
            + [np.array([cuts[-1]])]
        )
        return _composite(func, edges, nodes, weights)

    panels = initial_panels
    previous = estimate(panels)
    change = float("inf")
    for _ in range(max_doublings):
        panels *= 2
        current = estimate(panels)
        change = abs(current - previous)
        if not np.isfinite(current):
            break
        if change <= max(rtol * abs(current), atol):
            return QuadratureResult(value=current, panels=panels, change=change)
        previous = current

    raise NumericalError(
        detail="Quadrature did not converge",
        code="QUADRATURE_NOT_CONVERGED",
        params={
            "interval": [a, b],
            "panels": panels,
            "last_estimate": previous,
            "last_change": change,
            "rtol": rtol,
        },
    )
