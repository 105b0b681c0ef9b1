from .bars import IntervalEvent, PriceBar, ScenarioSet
from .kernel import OptionKind, Payoff
from .market import (
    LogPriceFrame,
    MarketParams,
    SlitConfig,
    SlitSide,
    TrajectoryRequest,
    WeakTrajectorySample,
)
from .oracles import (
    Field,
    GbmParams,
    Grid,
    KernelDensity,
    KernelValidationReport,
    MonteCarloEstimate,
    NormSample,
)
from .qm import QmParams, WeakPosition

__all__ = [
    "IntervalEvent",
    "PriceBar",
    "ScenarioSet",
    "OptionKind",
    "Payoff",
    "LogPriceFrame",
    "MarketParams",
    "SlitConfig",
    "SlitSide",
    "TrajectoryRequest",
    "WeakTrajectorySample",
    "Field",
    "GbmParams",
    "Grid",
    "KernelDensity",
    "KernelValidationReport",
    "MonteCarloEstimate",
    "NormSample",
    "QmParams",
    "WeakPosition",
]
