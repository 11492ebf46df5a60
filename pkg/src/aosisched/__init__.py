"""Threshold scheduling for the age of system instability.

A status-update source watches a process whose instability age s grows until
a successfully decoded update resets it. Each slot the scheduler idles, sends
a compressed update (cheap, lower decode-stabilization probability) or sends
an uncompressed one (expensive, higher probability). The long-run average of
s plus transmission energy is minimized by a double-threshold rule: idle
below n1, compress on [n1, n2), send uncompressed from n2 on.

The package provides four independent routes to the same numbers and the
tooling to cross-check them: a relative-value-iteration solver for the
average-cost MDP, closed-form stationary distributions and objective values
for every threshold pair, an exhaustive/descent optimizer over (n1, n2), and
a Monte Carlo simulator plus a sparse balance-equation solve.
"""

from .model import (
    Action,
    ChainConstants,
    DriftCondition,
    EnergyOrder,
    InvalidProbability,
    ModelParams,
    ParameterError,
    QualityOrder,
    ThresholdPolicy,
    UnstableChain,
    chain_constants,
    increment_prob,
    stage_cost,
)
from .optimize import (
    BoundaryOptimum,
    OptimizeResult,
    find_optimum,
    grid_values,
    optimize_descent,
    optimize_exhaustive,
)
from .simulate import (
    SimConfig,
    SimEstimate,
    SingularSystem,
    brute_force_stationary,
    simulate,
)
from .solver import (
    NoConvergence,
    NotThreshold,
    SolveResult,
    SolverConfig,
    action_values,
    check_monotone,
    extract_thresholds,
    rvi_solve,
)
from .steady_state import (
    InfiniteThreshold,
    StationaryDistribution,
    SteadyStateReport,
    average_aosi,
    evaluate_policy,
    objective_F,
    stationary,
    transmit_fractions,
)
from .sweep import SweepSpec, SweepResult, run_sweep
from .verify import run_verification

__version__ = "0.1.0"

__all__ = [
    "Action",
    "BoundaryOptimum",
    "ChainConstants",
    "DriftCondition",
    "EnergyOrder",
    "InfiniteThreshold",
    "InvalidProbability",
    "ModelParams",
    "NoConvergence",
    "NotThreshold",
    "OptimizeResult",
    "ParameterError",
    "QualityOrder",
    "SimConfig",
    "SimEstimate",
    "SingularSystem",
    "SolveResult",
    "SolverConfig",
    "StationaryDistribution",
    "SteadyStateReport",
    "SweepResult",
    "SweepSpec",
    "ThresholdPolicy",
    "UnstableChain",
    "action_values",
    "average_aosi",
    "brute_force_stationary",
    "chain_constants",
    "check_monotone",
    "evaluate_policy",
    "extract_thresholds",
    "find_optimum",
    "grid_values",
    "increment_prob",
    "objective_F",
    "optimize_descent",
    "optimize_exhaustive",
    "rvi_solve",
    "run_sweep",
    "run_verification",
    "simulate",
    "stage_cost",
    "stationary",
    "transmit_fractions",
    "__version__",
]
