"""
Ordinary quantum-mechanics double slit: free-particle kernel, interference
pattern and the complex weak trajectory. Slits sit at +-x_i.
"""
import math
from typing import Union

import numpy as np

from weakslit.core.config import settings
from weakslit.core.errors import DomainError
from weakslit.schemas.qm import QmParams, WeakPosition

ArrayLike = Union[float, np.ndarray]


def feynman_kernel(x_f: ArrayLike, x_i: ArrayLike, qm: QmParams) -> ArrayLike:
    """(m / (2 pi i hbar T))^(1/2) exp(i m (x_f - x_i)^2 / (2 hbar T)), principal branch."""
    if not qm.T > 0:
        raise DomainError(detail=f"T must be positive, got {qm.T}")
    prefactor = np.sqrt(complex(qm.m / (2.0 * math.pi * 1j * qm.hbar * qm.T)))
    phase = qm.m * (np.asarray(x_f, dtype=float) - np.asarray(x_i, dtype=float)) ** 2 / (2.0 * qm.hbar * qm.T)
    value = prefactor * np.exp(1j * phase)
    return complex(value) if np.ndim(value) == 0 else value


def superposed_intensity(x_f: ArrayLike, qm: QmParams) -> ArrayLike:
    """|K(x_f, x_i) + K(x_f, -x_i)|^2 from the two kernel amplitudes."""
    amplitude = feynman_kernel(x_f, qm.x_i, qm) + feynman_kernel(x_f, -qm.x_i, qm)
    value = np.abs(amplitude) ** 2
    return float(value) if np.ndim(value) == 0 else value


def interference_pattern(x_f: ArrayLike, qm: QmParams) -> ArrayLike:
    """1 + cos(2 m x_i x_f / (hbar T)); the constant modulus factor is dropped."""
    value = 1.0 + np.cos(2.0 * qm.m * qm.x_i * np.asarray(x_f, dtype=float) / (qm.hbar * qm.T))
    return float(value) if np.ndim(value) == 0 else value


def pattern_period(qm: QmParams) -> float:
    """Fringe period of the pattern in x_f."""
    if qm.x_i == 0:
        return math.inf
    return math.pi * qm.hbar * qm.T / (qm.m * qm.x_i)


def qm_weak_trajectory(t: float, x_f: float, qm: QmParams) -> WeakPosition:
    """
    x_f t/T - i x_i (1 - t/T) tan(m x_i x_f / (hbar T)).

    The imaginary part is exactly zero at constructive orders and a signed
    infinity, flagged divergent, at destructive poles.
    """
    if not 0.0 <= t <= qm.T:
        raise DomainError(detail=f"t={t} outside [0, {qm.T}]", params={"t": t, "T": qm.T})
    s = t / qm.T
    real = x_f * s
    weight = qm.x_i * (1.0 - s)
    argument = qm.m * qm.x_i * x_f / (qm.hbar * qm.T)
    tolerance = settings.QM_POLE_TOLERANCE

    if weight == 0.0 or abs(math.sin(argument)) <= tolerance:
        return WeakPosition(value=complex(real, 0.0), divergent=False)
    if abs(math.cos(argument)) <= tolerance:
        sign = math.copysign(1.0, math.sin(argument) * math.cos(argument))
        return WeakPosition(value=complex(real, -sign * math.inf), divergent=True)
    return WeakPosition(value=complex(real, -weight * math.tan(argument)), divergent=False)


def fringe_spacing(n: int, lam: float, qm: QmParams) -> float:
    """Small-angle fringe relation: Delta y = d theta ~ n lambda."""
    if not lam > 0:
        raise DomainError(detail=f"wavelength must be positive, got {lam}")
    return n * lam
