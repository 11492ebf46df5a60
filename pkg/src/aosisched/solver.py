"""Average-cost MDP solver for the age process: truncated relative value iteration.

The state space is truncated at s_max with an absorbing-top clamp (s+1 maps to
s_max there); the iteration keeps the reference state s = 0 pinned at value 0
and stops when the span seminorm of successive differences falls below tol.
The optimal gain theta is read off as the midpoint of the final one-step
differences, which halves the residual bias of either extreme.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Action, ModelParams, ThresholdPolicy

__all__ = [
    "SolverConfig",
    "SolveResult",
    "NoConvergence",
    "NotThreshold",
    "action_values",
    "rvi_solve",
    "extract_thresholds",
    "check_monotone",
]


class NoConvergence(RuntimeError):
    def __init__(self, iterations: int, span_residual: float, tol: float):
        self.iterations = iterations
        self.span_residual = span_residual
        super().__init__(
            f"span {span_residual:.3e} still above tol {tol:.3e} "
            f"after {iterations} iterations"
        )


class NotThreshold(RuntimeError):
    """The greedy policy is not Idle/Compressed/Uncompressed in three ordered
    segments; carries the first state whose action breaks the order."""

    def __init__(self, state: int):
        self.state = state
        super().__init__(f"policy violates threshold structure at state {state}")


@dataclass(frozen=True)
class SolverConfig:
    s_max: int = 2000
    tol: float = 1e-10
    max_iter: int = 200_000

    def __post_init__(self):
        if not isinstance(self.s_max, int) or self.s_max < 10:
            raise ValueError(f"s_max={self.s_max!r} must be an integer >= 10")
        if not (self.tol > 0):
            raise ValueError(f"tol={self.tol!r} must be positive")
        if not isinstance(self.max_iter, int) or self.max_iter < 1:
            raise ValueError(f"max_iter={self.max_iter!r} must be a positive integer")


@dataclass(frozen=True, eq=False)
class SolveResult:
    theta: float
    v: np.ndarray
    policy: np.ndarray
    iterations: int
    span_residual: float

    @property
    def s_max(self) -> int:
        return len(self.v) - 1

    def to_json_dict(self) -> dict:
        n = extract_thresholds(self)
        return {
            "theta": self.theta,
            "n1": "inf" if math.isinf(n.n1) else n.n1,
            "n2": "inf" if math.isinf(n.n2) else n.n2,
            "iterations": self.iterations,
            "span_residual": self.span_residual,
        }


def action_values(params: ModelParams, v: np.ndarray, s: int) -> tuple[float, float, float]:
    """One-step lookahead values (Idle, Compressed, Uncompressed) at state s.

    The successor s+1 is clamped to the top of v (absorbing-top truncation).
    """
    s_max = len(v) - 1
    if s < 0 or s > s_max:
        raise ValueError(f"s={s} outside [0, {s_max}]")
    r = (1.0 - params.r0) if s == 0 else params.r1
    nxt = float(v[min(s + 1, s_max)])
    ref = float(v[0])
    m1 = 1.0 - params.rho * params.p
    m2 = 1.0 - params.rho * params.q
    v0 = s + r * nxt + (1.0 - r) * ref
    v1 = s + params.lambda1 + m1 * r * nxt + (1.0 - m1 * r) * ref
    v2 = s + params.lambda2 + m2 * r * nxt + (1.0 - m2 * r) * ref
    return v0, v1, v2


def _sweep_tables(params: ModelParams, s_max: int):
    states = np.arange(s_max + 1, dtype=float)
    r = np.full(s_max + 1, params.r1)
    r[0] = 1.0 - params.r0
    m1 = 1.0 - params.rho * params.p
    m2 = 1.0 - params.rho * params.q
    return states, r, r * m1, r * m2


def _action_value_vectors(params, states, c0, c1, c2, v):
    nxt = np.empty_like(v)
    nxt[:-1] = v[1:]
    nxt[-1] = v[-1]
    ref = v[0]
    t0 = states + c0 * nxt + (1.0 - c0) * ref
    t1 = states + params.lambda1 + c1 * nxt + (1.0 - c1) * ref
    t2 = states + params.lambda2 + c2 * nxt + (1.0 - c2) * ref
    return t0, t1, t2


def rvi_solve(params: ModelParams, config: SolverConfig = SolverConfig()) -> SolveResult:
    """Relative value iteration; returns gain, differential values and the
    greedy policy (ties broken toward the smallest action index)."""
    states, c0, c1, c2 = _sweep_tables(params, config.s_max)
    v = np.zeros(config.s_max + 1)
    span = math.inf
    theta = math.nan
    for it in range(1, config.max_iter + 1):
        t0, t1, t2 = _action_value_vectors(params, states, c0, c1, c2, v)
        tv = np.minimum(t0, np.minimum(t1, t2))
        diff = tv - v
        dmax = float(diff.max())
        dmin = float(diff.min())
        span = dmax - dmin
        v = tv - tv[0]
        if span < config.tol:
            theta = 0.5 * (dmax + dmin)
            break
    else:
        raise NoConvergence(config.max_iter, span, config.tol)
    t0, t1, t2 = _action_value_vectors(params, states, c0, c1, c2, v)
    policy = np.argmin(np.stack([t0, t1, t2]), axis=0).astype(np.int8)
    return SolveResult(theta=theta, v=v, policy=policy,
                       iterations=it, span_residual=span)


def _policy_vector(result) -> np.ndarray:
    if isinstance(result, SolveResult):
        return result.policy
    return np.asarray(result)


def extract_thresholds(result) -> ThresholdPolicy:
    """Read (n1, n2) off the policy vector; a segment empty through s_max
    yields an infinite threshold. Raises NotThreshold if actions ever step
    back down the index order."""
    pol = _policy_vector(result)
    steps = np.diff(pol)
    bad = np.nonzero(steps < 0)[0]
    if bad.size:
        raise NotThreshold(int(bad[0]) + 1)
    nonidle = np.nonzero(pol != Action.IDLE)[0]
    n1 = int(nonidle[0]) if nonidle.size else math.inf
    unc = np.nonzero(pol == Action.UNCOMPRESSED)[0]
    n2 = int(unc[0]) if unc.size else math.inf
    return ThresholdPolicy(n1, n2)


def check_monotone(result, tol: float = 1e-9) -> tuple[bool, int | None]:
    """True iff v[s+1] >= v[s] - tol for all s; else the first state whose
    value drops below its predecessor."""
    v = result.v if isinstance(result, SolveResult) else np.asarray(result)
    bad = np.nonzero(v[1:] < v[:-1] - tol)[0]
    if bad.size:
        return False, int(bad[0]) + 1
    return True, None
