"""
weakslit qm: quantum double-slit reference data.
"""
import argparse

import numpy as np
from pydantic import Field, model_validator

from weakslit.commands.base import RunConfig, add_output_arguments
from weakslit.core.config import settings
from weakslit.core.qm_reference import interference_pattern, qm_weak_trajectory
from weakslit.schemas.qm import QmParams
from weakslit.utils.responses import Table, write_table


class QmConfig(RunConfig):
    m: float
    hbar: float
    T: float
    xi: float


class QmPatternConfig(QmConfig):
    xf_min: float
    xf_max: float
    points: int

    @model_validator(mode="after")
    def _check_range(self) -> "QmPatternConfig":
        if not self.xf_min < self.xf_max:
            raise ValueError("--xf-min must be below --xf-max")
        if self.points < 2:
            raise ValueError("--points must be at least 2")
        return self


class QmTrajectoryConfig(QmConfig):
    xf: float
    steps: int = Field(ge=2)


def _qm(config: QmConfig) -> QmParams:
    return QmParams(m=config.m, hbar=config.hbar, T=config.T, x_i=config.xi)


def run_pattern(args: argparse.Namespace) -> int:
    config = QmPatternConfig.from_args(args)
    screen = np.linspace(config.xf_min, config.xf_max, config.points)
    values = interference_pattern(screen, _qm(config))
    rows = [{"x_f": float(x), "pattern": float(v)} for x, v in zip(screen, values)]
    write_table(Table(columns=["x_f", "pattern"], rows=rows), config.out, config.format,
                message="interference pattern")
    return 0


def run_trajectory(args: argparse.Namespace) -> int:
    """
    Complex weak position over t, written as real and imaginary columns.
    """
    config = QmTrajectoryConfig.from_args(args)
    qm = _qm(config)
    rows = []
    for t in np.linspace(0.0, qm.T, config.steps):
        position = qm_weak_trajectory(float(t), config.xf, qm)
        rows.append({
            "t": float(t),
            "real": position.value.real,
            "imag": position.value.imag,
            "divergent": int(position.divergent),
        })
    write_table(Table(columns=["t", "real", "imag", "divergent"], rows=rows), config.out, config.format,
                message="quantum weak trajectory")
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("qm", help="quantum double-slit reference")
    actions = parser.add_subparsers(dest="action", required=True)

    def add_common(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--m", type=float, default=1.0, help="mass")
        sub.add_argument("--hbar", type=float, default=1.0)
        sub.add_argument("--T", type=float, default=1.0, help="time to the screen")
        sub.add_argument("--xi", type=float, default=1.0, help="slit half-separation")
        add_output_arguments(sub)

    pattern = actions.add_parser("pattern", help="1 + cos(2 m x_i x_f / (hbar T)) over a screen grid")
    add_common(pattern)
    pattern.add_argument("--xf-min", type=float, default=-5.0)
    pattern.add_argument("--xf-max", type=float, default=5.0)
    pattern.add_argument("--points", type=int, default=201)
    pattern.set_defaults(handler=run_pattern)

    trajectory = actions.add_parser("trajectory", help="complex weak trajectory towards one screen point")
    add_common(trajectory)
    trajectory.add_argument("--xf", type=float, required=True, help="screen point")
    trajectory.add_argument("--steps", type=int, default=settings.TRAJECTORY_STEPS)
    trajectory.set_defaults(handler=run_trajectory)
