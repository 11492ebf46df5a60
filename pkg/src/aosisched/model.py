"""Markov model of a remotely stabilized plant and its transmission actions.

The plant state is summarized by the age of system instability (AoSI): the
number of consecutive slots the plant has been unstable. Each slot the
controller idles, sends a compressed update, or sends an uncompressed update;
updates land with probability rho and stabilize the plant with probability p
(compressed) or q (uncompressed).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, fields

__all__ = [
    "Action",
    "ModelParams",
    "ChainConstants",
    "ThresholdPolicy",
    "ParameterError",
    "InvalidProbability",
    "DriftCondition",
    "QualityOrder",
    "EnergyOrder",
    "UnstableChain",
    "chain_constants",
    "increment_prob",
    "stage_cost",
]

# Absolute slack absorbed at parameter boundaries (text-parsing round-off).
BOUNDARY_TOL = 1e-12

F_MODES = ("kernel", "paper_literal")


class ParameterError(ValueError):
    """A model parameter violates one of the admissibility conditions."""


class InvalidProbability(ParameterError):
    pass


class DriftCondition(ParameterError):
    """r0 + r1 < 1: the source would be mean-reverting the wrong way."""


class QualityOrder(ParameterError):
    """q < p: uncompressed updates must stabilize at least as well."""


class EnergyOrder(ParameterError):
    """Reserved for the modeling assumption lambda2 >= lambda1.

    Not enforced at construction: energy-grid sweeps legitimately evaluate
    cells with lambda2 < lambda1 (the uncompressed update then simply
    dominates and the optimizer never selects Compressed).
    """


class UnstableChain(ParameterError):
    """max(a, b, c) >= 1: the AoSI chain would not be positive recurrent."""


class Action(enum.IntEnum):
    IDLE = 0
    COMPRESSED = 1
    UNCOMPRESSED = 2


def _unit(name: str, x) -> float:
    x = float(x)
    if not math.isfinite(x) or x < -BOUNDARY_TOL or x > 1.0 + BOUNDARY_TOL:
        raise InvalidProbability(f"{name}={x!r} is not a probability in [0, 1]")
    return min(max(x, 0.0), 1.0)


def _energy(name: str, x) -> float:
    x = float(x)
    if not math.isfinite(x) or x < -BOUNDARY_TOL:
        raise ParameterError(f"{name}={x!r} must be a finite non-negative energy")
    return max(x, 0.0)


@dataclass(frozen=True)
class ModelParams:
    """Validated model parameters.

    r0: probability the plant stays stable for one more slot.
    r1: probability the plant stays unstable for one more slot.
    rho: probability a transmitted update is decoded.
    p, q: stabilization probability of a decoded compressed / uncompressed update.
    lambda1, lambda2: per-slot energy of a compressed / uncompressed transmission.
    f_mode: which state-0 Uncompressed constant the closed forms use
        ("kernel" derives it from the transition kernel, "paper_literal"
        keeps the historical (1-r0)(1-rho) value for comparison).
    """

    r0: float
    r1: float
    rho: float
    p: float
    q: float
    lambda1: float
    lambda2: float
    f_mode: str = "kernel"

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "r0", _unit("r0", self.r0))
        set_(self, "r1", _unit("r1", self.r1))
        set_(self, "rho", _unit("rho", self.rho))
        set_(self, "p", _unit("p", self.p))
        set_(self, "q", _unit("q", self.q))
        set_(self, "lambda1", _energy("lambda1", self.lambda1))
        set_(self, "lambda2", _energy("lambda2", self.lambda2))
        if self.f_mode not in F_MODES:
            raise ParameterError(
                f"f_mode={self.f_mode!r} must be one of {F_MODES}"
            )
        if self.r0 + self.r1 < 1.0 - BOUNDARY_TOL:
            raise DriftCondition(
                f"r0 + r1 = {self.r0 + self.r1!r} < 1: instability must be "
                "at least as persistent as stability"
            )
        if self.q < self.p:
            if self.q < self.p - BOUNDARY_TOL:
                raise QualityOrder(f"q={self.q!r} < p={self.p!r}")
            set_(self, "q", self.p)
        a = self.r1
        b = self.r1 * (1.0 - self.rho * self.p)
        c = self.r1 * (1.0 - self.rho * self.q)
        if max(a, b, c) >= 1.0:
            raise UnstableChain(
                f"max(a, b, c) = {max(a, b, c)!r} >= 1: AoSI diverges under "
                "every policy (need r1 < 1)"
            )

    def to_dict(self) -> dict:
        d = {
            "r0": self.r0,
            "r1": self.r1,
            "rho": self.rho,
            "p": self.p,
            "q": self.q,
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
        }
        if self.f_mode != "kernel":
            d["f_mode"] = self.f_mode
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ModelParams":
        """Build from a flat mapping; extra keys are ignored so a single
        config document can also carry sweep/solver settings."""
        missing = [f.name for f in fields(cls)
                   if f.name != "f_mode" and f.name not in d]
        if missing:
            raise ParameterError(f"missing parameter(s): {', '.join(missing)}")
        return cls(
            r0=d["r0"], r1=d["r1"], rho=d["rho"], p=d["p"], q=d["q"],
            lambda1=d["lambda1"], lambda2=d["lambda2"],
            f_mode=d.get("f_mode", "kernel"),
        )

    def replace(self, **changes) -> "ModelParams":
        d = dict(
            r0=self.r0, r1=self.r1, rho=self.rho, p=self.p, q=self.q,
            lambda1=self.lambda1, lambda2=self.lambda2, f_mode=self.f_mode,
        )
        d.update(changes)
        return ModelParams(**d)


@dataclass(frozen=True)
class ChainConstants:
    """Per-slot AoSI increment probabilities of the policy-induced chain.

    From an unstable slot (s >= 1) the age grows with probability
    a (Idle), b (Compressed) or c (Uncompressed); from a stable slot (s = 0)
    with probability d (Idle), e (Compressed) or f (Uncompressed).
    """

    a: float
    b: float
    c: float
    d: float
    e: float
    f: float


def chain_constants(params: ModelParams, mode: str | None = None) -> ChainConstants:
    """Chain constants of params; mode overrides params.f_mode if given."""
    mode = params.f_mode if mode is None else mode
    if mode not in F_MODES:
        raise ParameterError(f"mode={mode!r} must be one of {F_MODES}")
    r0, r1, rho, p, q = params.r0, params.r1, params.rho, params.p, params.q
    a = r1
    b = r1 * (1.0 - rho * p)
    c = r1 * (1.0 - rho * q)
    d = 1.0 - r0
    e = (1.0 - r0) * (1.0 - rho * p)
    if mode == "kernel":
        f = (1.0 - r0) * (1.0 - rho * q)
    else:
        f = (1.0 - r0) * (1.0 - rho)
    return ChainConstants(a=a, b=b, c=c, d=d, e=e, f=f)


def increment_prob(params: ModelParams, s: int, action: Action | int) -> float:
    """Probability that AoSI increments (s -> s+1) this slot.

    The complement is the reset probability (s -> 0). From s = 0 the base
    growth rate is 1 - r0, from s >= 1 it is r1; a transmission that is both
    decoded and stabilizing suppresses the growth.
    """
    if s < 0:
        raise ValueError(f"s={s} must be a non-negative age")
    r = (1.0 - params.r0) if s == 0 else params.r1
    action = Action(action)
    if action is Action.IDLE:
        return r
    if action is Action.COMPRESSED:
        return r * (1.0 - params.rho * params.p)
    return r * (1.0 - params.rho * params.q)


def stage_cost(params: ModelParams, s: int, action: Action | int) -> float:
    """One-slot cost: current age plus the energy of the chosen action."""
    if s < 0:
        raise ValueError(f"s={s} must be a non-negative age")
    action = Action(action)
    if action is Action.IDLE:
        return float(s)
    if action is Action.COMPRESSED:
        return float(s) + params.lambda1
    return float(s) + params.lambda2


def _as_threshold(name: str, value) -> int | float:
    if isinstance(value, bool):
        raise ValueError(f"{name}={value!r} is not a valid threshold")
    if isinstance(value, float):
        if math.isinf(value) and value > 0:
            return math.inf
        if not value.is_integer() or value < 0:
            raise ValueError(f"{name}={value!r} must be a non-negative integer or inf")
        return int(value)
    if isinstance(value, int):
        if value < 0:
            raise ValueError(f"{name}={value!r} must be >= 0")
        return value
    raise ValueError(f"{name}={value!r} must be a non-negative integer or inf")


@dataclass(frozen=True)
class ThresholdPolicy:
    """Two-threshold policy: Idle below n1, Compressed on [n1, n2),
    Uncompressed from n2 upward. Either threshold may be math.inf."""

    n1: int | float
    n2: int | float

    def __post_init__(self):
        object.__setattr__(self, "n1", _as_threshold("n1", self.n1))
        object.__setattr__(self, "n2", _as_threshold("n2", self.n2))
        if self.n1 > self.n2:
            raise ValueError(f"n1={self.n1} > n2={self.n2}")

    def action(self, s: int) -> Action:
        if s < self.n1:
            return Action.IDLE
        if s < self.n2:
            return Action.COMPRESSED
        return Action.UNCOMPRESSED

    def as_tuple(self) -> tuple:
        return (self.n1, self.n2)

    @property
    def is_finite(self) -> bool:
        return not (math.isinf(self.n1) or math.isinf(self.n2))
