"""
weakslit trajectory: sampled weak price trajectories with their classical envelope.
"""
import argparse
import logging
from enum import Enum
from typing import List, Optional

from pydantic import Field, model_validator

from weakslit.commands.base import RunConfig, add_output_arguments, exactly_one, float_list
from weakslit.core.config import settings
from weakslit.core.coordinates import from_centered, to_centered
from weakslit.core.errors import DomainError
from weakslit.core.weak_value import sample_trajectory
from weakslit.schemas.market import (
    LogPriceFrame,
    MarketParams,
    SlitConfig,
    SlitSide,
    TrajectoryRequest,
)
from weakslit.utils.responses import Table, write_table

logger = logging.getLogger(__name__)

COLUMNS = ["t", "tau", "x_w", "band_low", "band_high", "S_w"]


class TrajectoryMode(str, Enum):
    forward = "forward"
    inverse = "inverse"
    nslit = "nslit"


class TrajectoryConfig(RunConfig):
    mode: TrajectoryMode
    r: float
    sigma: float
    T: float
    xi: Optional[float] = None
    slits: Optional[List[float]] = None
    weights: Optional[List[float]] = None
    side: SlitSide = SlitSide.pre
    xf: Optional[float] = None
    final_price: Optional[float] = None
    steps: int = Field(ge=2)
    shift_c: float = 0.0

    @model_validator(mode="after")
    def _check_flags(self) -> "TrajectoryConfig":
        if self.mode == TrajectoryMode.inverse:
            if self.xi is None or self.xf is None:
                raise ValueError("inverse mode needs --xi and --xf")
            if self.final_price is not None or self.slits is not None:
                raise ValueError("inverse mode takes neither --final-price nor --slits")
        elif self.mode == TrajectoryMode.forward:
            if self.xi is None:
                raise ValueError("forward mode needs --xi")
            if self.slits is not None:
                raise ValueError("forward mode takes --xi, not --slits")
            if not exactly_one(self.xf, self.final_price):
                raise ValueError("forward mode needs exactly one of --xf and --final-price")
        elif self.side == SlitSide.post:
            if self.slits is None or self.xi is None:
                raise ValueError("nslit --side post needs --slits and the initial price --xi")
            if self.xf is not None or self.final_price is not None:
                raise ValueError("nslit --side post takes no final price")
        else:
            if not exactly_one(self.slits, self.xi):
                raise ValueError("nslit mode needs exactly one of --slits and --xi")
            if not exactly_one(self.xf, self.final_price):
                raise ValueError("nslit mode needs exactly one of --xf and --final-price")
        if self.weights is not None and self.mode != TrajectoryMode.nslit:
            raise ValueError("--weights only applies to nslit mode")
        if self.side == SlitSide.post and self.mode != TrajectoryMode.nslit:
            raise ValueError("--side only applies to nslit mode")
        return self


def _pair(half: float, name: str) -> List[float]:
    if half < 0:
        raise DomainError(detail=f"{name} must be nonnegative, got {half}", params={name: half})
    return [half, -half] if half > 0 else [0.0]


def build_request(config: TrajectoryConfig) -> TrajectoryRequest:
    frame = LogPriceFrame(c=config.shift_c)
    params = MarketParams(r=config.r, sigma=config.sigma, T=config.T)
    final = config.xf
    if config.final_price is not None:
        final = to_centered(config.final_price, frame)

    if config.mode == TrajectoryMode.forward:
        slits = SlitConfig(positions=_pair(config.xi, "xi"), endpoint=final, side=SlitSide.pre)
    elif config.mode == TrajectoryMode.inverse:
        slits = SlitConfig(positions=_pair(config.xf, "xf"), endpoint=config.xi, side=SlitSide.post)
    elif config.side == SlitSide.post:
        slits = SlitConfig(
            positions=config.slits, endpoint=config.xi, side=SlitSide.post, weights=config.weights
        )
    else:
        positions = config.slits if config.slits is not None else _pair(config.xi, "xi")
        slits = SlitConfig(positions=positions, endpoint=final, side=SlitSide.pre, weights=config.weights)
    return TrajectoryRequest(slits=slits, params=params, frame=frame, steps=config.steps)


def run(args: argparse.Namespace) -> int:
    """
    Sample the weak trajectory and write one row per time step.
    """
    config = TrajectoryConfig.from_args(args)
    request = build_request(config)
    samples = sample_trajectory(request)
    rows = [
        {
            "t": sample.t,
            "tau": sample.tau,
            "x_w": sample.x_w,
            "band_low": sample.band_low,
            "band_high": sample.band_high,
            "S_w": from_centered(sample.x_w, request.frame),
        }
        for sample in samples
    ]
    write_table(Table(columns=COLUMNS, rows=rows), config.out, config.format, message="weak trajectory")
    logger.info(f"trajectory: wrote {len(rows)} samples to {config.out}")
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("trajectory", help="weak price trajectory of a double (or n-) slit")
    parser.add_argument("--mode", choices=[m.value for m in TrajectoryMode], required=True)
    parser.add_argument("--r", type=float, required=True, help="spot rate")
    parser.add_argument("--sigma", type=float, required=True, help="volatility")
    parser.add_argument("--T", type=float, required=True, help="maturity")
    parser.add_argument("--xi", type=float, help="slit half-separation (forward) or initial price")
    parser.add_argument("--slits", type=float_list, help="slit positions a1,a2,...")
    parser.add_argument("--weights", type=float_list, help="slit weights w1,w2,...")
    parser.add_argument("--side", choices=[s.value for s in SlitSide], default=SlitSide.pre.value)
    parser.add_argument("--xf", type=float, help="final price (forward) or slit half-separation (inverse)")
    parser.add_argument("--final-price", type=float, help="final price S; x_f = ln(S) - c")
    parser.add_argument("--steps", type=int, default=settings.TRAJECTORY_STEPS)
    parser.add_argument("--shift-c", type=float, default=0.0, help="log-price shift c")
    add_output_arguments(parser)
    parser.set_defaults(handler=run)
