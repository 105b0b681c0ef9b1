"""
weakslit kernel: point evaluation, kernel pricing and oracle validation of the pricing kernel.
"""
import argparse
import logging
import math

from weakslit.commands.base import RunConfig, add_output_arguments
from weakslit.core.config import settings
from weakslit.core.coordinates import to_centered
from weakslit.core.errors import ValidationFailure
from weakslit.core.kernel import bs_kernel, parity_gap, price_option
from weakslit.oracles.validation import validate_kernel
from weakslit.schemas.kernel import OptionKind, Payoff
from weakslit.schemas.market import LogPriceFrame, MarketParams
from weakslit.schemas.oracles import Grid
from weakslit.utils.responses import Table, write_table

logger = logging.getLogger(__name__)


class KernelEvalConfig(RunConfig):
    x: float
    tau: float
    x_prime: float
    r: float
    sigma: float


class KernelPriceConfig(RunConfig):
    S: float
    K: float
    tau: float
    r: float
    sigma: float
    shift_c: float = 0.0


class KernelValidateConfig(RunConfig):
    r: float
    sigma: float
    tau: float
    grid_n: int
    x_min: float
    x_max: float
    steps: int
    paths: int
    bins: int
    seed: int


def _params(r: float, sigma: float, tau: float) -> MarketParams:
    # The kernel only needs a horizon at least as long as tau.
    return MarketParams(r=r, sigma=sigma, T=tau)


def run_eval(args: argparse.Namespace) -> int:
    config = KernelEvalConfig.from_args(args)
    value = bs_kernel(config.x, config.tau, config.x_prime, _params(config.r, config.sigma, config.tau))
    table = Table(
        columns=["x", "tau", "x_prime", "value"],
        rows=[{"x": config.x, "tau": config.tau, "x_prime": config.x_prime, "value": value}],
    )
    write_table(table, config.out, config.format, message="kernel value")
    return 0


def run_price(args: argparse.Namespace) -> int:
    """
    Kernel-priced European call and put on the same strike, with the parity gap.
    """
    config = KernelPriceConfig.from_args(args)
    params = _params(config.r, config.sigma, config.tau)
    frame = LogPriceFrame(c=config.shift_c)
    x = to_centered(config.S, frame)
    call = price_option(Payoff(kind=OptionKind.call, strike=config.K), params, config.tau, x, frame)
    put = price_option(Payoff(kind=OptionKind.put, strike=config.K), params, config.tau, x, frame)
    table = Table(
        columns=["S", "K", "tau", "call", "put", "parity_gap"],
        rows=[{
            "S": config.S,
            "K": config.K,
            "tau": config.tau,
            "call": call,
            "put": put,
            "parity_gap": parity_gap(call, put, config.S, config.K, config.r, config.tau),
        }],
    )
    write_table(table, config.out, config.format, message="kernel prices")
    return 0


def run_validate(args: argparse.Namespace) -> int:
    """
    Run the PDE and Monte Carlo oracles; the report is written before failures are raised.
    """
    config = KernelValidateConfig.from_args(args)
    report = validate_kernel(
        _params(config.r, config.sigma, config.tau),
        tau=config.tau,
        grid=Grid(x_min=config.x_min, x_max=config.x_max, n=config.grid_n),
        n_time_steps=config.steps,
        n_paths=config.paths,
        bins=config.bins,
        seed=config.seed,
    )
    rows = [
        {"metric": name, "value": value, "passed": int(name not in report.failures)}
        for name, value in report.metrics.items()
    ]
    rows.append({"metric": "expected_mass_ratio", "value": math.exp(-config.r * config.tau), "passed": 1})
    write_table(
        Table(columns=["metric", "value", "passed"], rows=rows),
        config.out,
        config.format,
        message="kernel validation passed" if report.passed else "kernel validation failed",
    )
    if not report.passed:
        raise ValidationFailure(
            detail=f"Kernel validation failed: {', '.join(report.failures)}",
            params={"metrics": report.failures},
        )
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("kernel", help="Black-Scholes pricing kernel")
    actions = parser.add_subparsers(dest="action", required=True)

    evaluate = actions.add_parser("eval", help="evaluate p(x, tau; x')")
    evaluate.add_argument("--x", type=float, required=True)
    evaluate.add_argument("--tau", type=float, required=True)
    evaluate.add_argument("--x-prime", type=float, required=True)
    evaluate.add_argument("--r", type=float, required=True)
    evaluate.add_argument("--sigma", type=float, required=True)
    add_output_arguments(evaluate)
    evaluate.set_defaults(handler=run_eval)

    price = actions.add_parser("price", help="price a call and a put by kernel quadrature")
    price.add_argument("--S", type=float, required=True, help="spot price")
    price.add_argument("--K", type=float, required=True, help="strike")
    price.add_argument("--tau", type=float, required=True, help="time to maturity")
    price.add_argument("--r", type=float, required=True)
    price.add_argument("--sigma", type=float, required=True)
    price.add_argument("--shift-c", type=float, default=0.0)
    add_output_arguments(price)
    price.set_defaults(handler=run_price)

    validate = actions.add_parser("validate", help="check the kernel against the PDE and Monte Carlo")
    validate.add_argument("--r", type=float, default=0.05)
    validate.add_argument("--sigma", type=float, default=0.2)
    validate.add_argument("--tau", type=float, default=1.0)
    validate.add_argument("--grid-n", type=int, default=4000)
    validate.add_argument("--x-min", type=float, default=-3.0)
    validate.add_argument("--x-max", type=float, default=3.0)
    validate.add_argument("--steps", type=int, default=2000, help="Crank-Nicolson time steps")
    validate.add_argument("--paths", type=int, default=10_000_000, help="Monte Carlo paths")
    validate.add_argument("--bins", type=int, default=50)
    validate.add_argument("--seed", type=int, default=settings.WEAKSLIT_SEED)
    add_output_arguments(validate)
    validate.set_defaults(handler=run_validate)
