"""Closed-form steady-state analysis of the AoSI chain under a threshold policy.

Under a two-threshold policy the age process is a reset chain whose stationary
distribution is piecewise geometric: ratio a on the Idle segment, b on the
Compressed segment, c on the Uncompressed tail, with a separate growth
probability out of state 0. All quantities below (stationary law, mean age,
transmit fractions, average-cost objective) are evaluated in closed form,
including the limiting policies that never transmit (n1 = n2 = inf) or never
send uncompressed (n2 = inf).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ChainConstants, ModelParams, ThresholdPolicy, chain_constants

__all__ = [
    "InfiniteThreshold",
    "Segment",
    "StationaryDistribution",
    "SteadyStateReport",
    "stationary",
    "average_aosi",
    "transmit_fractions",
    "objective_F",
    "evaluate_policy",
]


class InfiniteThreshold(ValueError):
    """An operation that needs finite thresholds was given an infinite one."""


def _policy(n) -> ThresholdPolicy:
    if isinstance(n, ThresholdPolicy):
        return n
    return ThresholdPolicy(*n)


def _case_tag(n: ThresholdPolicy) -> str:
    if math.isinf(n.n2):
        if math.isinf(n.n1):
            return "never_transmit"
        if n.n1 == 0:
            return "all_compressed"
        return "no_uncompressed"
    if n.n2 == 0:
        return "both_zero"
    if n.n1 == 0:
        return "n1_zero"
    return "both_positive"


# ---------------------------------------------------------------------------
# Normalizing constant u(0), one expression per case. These accept scalars or
# numpy arrays for the thresholds so grid sweeps can evaluate them in bulk.

def _u0_both_positive(cc: ChainConstants, n1, n2):
    a, b, c, d = cc.a, cc.b, cc.c, cc.d
    an = a ** (n1 - 1)
    bm = b ** (n2 - n1)
    den = ((1 - a + d) * (1 - c) * (1 - b)
           + (1 - c) * (b - a) * d * an
           + d * (1 - a) * (c - b) * bm * an)
    return (1 - a) * (1 - b) * (1 - c) / den


def _u0_n1_zero(cc: ChainConstants, n2):
    b, c, e = cc.b, cc.c, cc.e
    den = (1 - b + e) * (1 - c) + (c - b) * e * b ** (n2 - 1)
    return (1 - b) * (1 - c) / den


def _u0_both_zero(cc: ChainConstants):
    c, f = cc.c, cc.f
    return (1 - c) / (1 - c + f)


def _u0_no_uncompressed(cc: ChainConstants, n1):
    a, b, d = cc.a, cc.b, cc.d
    den = (1 - a + d) * (1 - b) + (b - a) * d * a ** (n1 - 1)
    return (1 - a) * (1 - b) / den


def _u0_all_compressed(cc: ChainConstants):
    b, e = cc.b, cc.e
    return (1 - b) / (1 - b + e)


def _u0_never_transmit(cc: ChainConstants):
    a, d = cc.a, cc.d
    return (1 - a) / (1 - a + d)


# ---------------------------------------------------------------------------
# Mean age, transmit fractions and the average-cost objective. The objective
# is evaluated from its own single-fraction expression per case, not by
# composing the other two, so tests can cross-check the two routes.

def _mean_both_positive(cc: ChainConstants, u0, n1, n2):
    a, b, c, d = cc.a, cc.b, cc.c, cc.d
    t1 = u0 * d * (a ** (n1 + 1) * n1 - n1 * a ** n1 - a ** n1 + 1) / (1 - a) ** 2
    t2 = (u0 * d * b * a ** (n1 - 1)
          * (b ** (n2 - n1) * (b * n2 - n2 - 1) - b * n1 + n1 + 1) / (1 - b) ** 2)
    t3 = (u0 * d * c * b ** (n2 - n1) * a ** (n1 - 1)
          * (-c * n2 + n2 + 1) / (1 - c) ** 2)
    return t1 + t2 + t3


def _mean_n1_zero(cc: ChainConstants, u0, n2):
    b, c, e = cc.b, cc.c, cc.e
    t1 = u0 * e * (b ** (n2 + 1) * n2 - n2 * b ** n2 - b ** n2 + 1) / (1 - b) ** 2
    t2 = u0 * e * c * b ** (n2 - 1) * (-c * n2 + n2 + 1) / (1 - c) ** 2
    return t1 + t2


def _mean_both_zero(cc: ChainConstants, u0):
    return u0 * cc.f / (1 - cc.c) ** 2


def _mean_no_uncompressed(cc: ChainConstants, u0, n1):
    a, b, d = cc.a, cc.b, cc.d
    t1 = u0 * d * (a ** (n1 + 1) * n1 - n1 * a ** n1 - a ** n1 + 1) / (1 - a) ** 2
    t2 = u0 * d * b * a ** (n1 - 1) * (-b * n1 + n1 + 1) / (1 - b) ** 2
    return t1 + t2


def _mean_all_compressed(cc: ChainConstants, u0):
    return u0 * cc.e / (1 - cc.b) ** 2


def _mean_never_transmit(cc: ChainConstants, u0):
    return u0 * cc.d / (1 - cc.a) ** 2


def _fractions_both_positive(cc: ChainConstants, u0, n1, n2):
    a, b, c, d = cc.a, cc.b, cc.c, cc.d
    an = a ** (n1 - 1)
    frac_c = u0 * d * an * (1 - b ** (n2 - n1)) / (1 - b)
    frac_u = u0 * d * an * b ** (n2 - n1) / (1 - c)
    return frac_c, frac_u


def _fractions_n1_zero(cc: ChainConstants, u0, n2):
    b, c, e = cc.b, cc.c, cc.e
    frac_c = u0 * (1 + e * (1 - b ** (n2 - 1)) / (1 - b))
    frac_u = u0 * e * b ** (n2 - 1) / (1 - c)
    return frac_c, frac_u


def _f_both_positive(cc: ChainConstants, lam1, lam2, n1, n2):
    a, b, c, d = cc.a, cc.b, cc.c, cc.d
    an = a ** (n1 - 1)
    bm = b ** (n2 - n1)
    den = ((1 - a + d) * (1 - c) * (1 - b)
           + (1 - c) * (b - a) * d * an
           + d * (1 - a) * (c - b) * bm * an)
    num = ((1 - b) * (1 - c) * d
           * (a ** (n1 + 1) * n1 - n1 * a ** n1 - a ** n1 + 1) / (1 - a)
           + d * b * (1 - a) * (1 - c) * an
           * (bm * (b * n2 - n2 - 1) - b * n1 + n1 + 1) / (1 - b)
           + d * c * (1 - a) * (1 - b) * bm * an * (-c * n2 + n2 + 1) / (1 - c)
           + lam1 * d * (1 - a) * (1 - c) * an * (1 - bm)
           + lam2 * d * an * (1 - a) * (1 - b) * bm)
    return num / den


def _f_n1_zero(cc: ChainConstants, lam1, lam2, n2):
    b, c, e = cc.b, cc.c, cc.e
    bn = b ** (n2 - 1)
    den = (1 - b + e) * (1 - c) + (c - b) * e * bn
    num = ((1 - c) * e
           * (b ** (n2 + 1) * n2 - n2 * b ** n2 - b ** n2 + 1) / (1 - b)
           + (1 - b) * e * c * bn * (-c * n2 + n2 + 1) / (1 - c)
           + lam1 * ((1 - b) * (1 - c) + e * (1 - c) * (1 - bn))
           + lam2 * (1 - b) * e * bn)
    return num / den


def _f_both_zero(cc: ChainConstants, lam2):
    c, f = cc.c, cc.f
    return f / ((1 - c + f) * (1 - c)) + lam2


def _f_no_uncompressed(cc: ChainConstants, lam1, n1):
    a, b, d = cc.a, cc.b, cc.d
    an = a ** (n1 - 1)
    den = (1 - a + d) * (1 - b) + (b - a) * d * an
    num = ((1 - b) * d
           * (a ** (n1 + 1) * n1 - n1 * a ** n1 - a ** n1 + 1) / (1 - a)
           + d * b * (1 - a) * an * (-b * n1 + n1 + 1) / (1 - b)
           + lam1 * d * (1 - a) * an)
    return num / den


def _f_all_compressed(cc: ChainConstants, lam1):
    b, e = cc.b, cc.e
    return (e / (1 - b) + lam1 * (1 - b + e)) / (1 - b + e)


def _f_never_transmit(cc: ChainConstants):
    a, d = cc.a, cc.d
    return d / ((1 - a + d) * (1 - a))


# ---------------------------------------------------------------------------
# Public API.

@dataclass(frozen=True)
class Segment:
    """One geometric stretch of the stationary law: u(i) = first * ratio**(i - lo)
    for lo <= i <= hi (hi None means the segment extends to infinity)."""

    lo: int
    hi: int | None
    first: float
    ratio: float


@dataclass(frozen=True)
class StationaryDistribution:
    """Piecewise-geometric stationary law of the policy-induced age chain."""

    n: ThresholdPolicy
    case_tag: str
    u0: float
    segments: tuple

    def pmf(self, i):
        """Stationary probability of age i; accepts scalars or int arrays."""
        arr = np.asarray(i)
        if np.any(arr < 0):
            raise ValueError("ages must be non-negative")
        out = np.zeros(arr.shape, dtype=float)
        out[arr == 0] = self.u0
        for seg in self.segments:
            if seg.hi is None:
                mask = arr >= seg.lo
            else:
                mask = (arr >= seg.lo) & (arr <= seg.hi)
            out[mask] = seg.first * seg.ratio ** (arr[mask] - seg.lo)
        if np.isscalar(i):
            return float(out)
        return out

    def mass_up_to(self, n: int) -> float:
        """Closed-form value of sum_{i=0}^{n} u(i)."""
        if n < 0:
            return 0.0
        total = self.u0
        for seg in self.segments:
            if n < seg.lo:
                continue
            hi = n if seg.hi is None else min(seg.hi, n)
            m = hi - seg.lo
            if seg.ratio == 1.0:
                total += seg.first * (m + 1)
            else:
                total += seg.first * (1 - seg.ratio ** (m + 1)) / (1 - seg.ratio)
        return total


def stationary(params: ModelParams, n) -> StationaryDistribution:
    """Stationary distribution of the age chain under threshold policy n."""
    n = _policy(n)
    cc = chain_constants(params)
    a, b, c, d, e, f = cc.a, cc.b, cc.c, cc.d, cc.e, cc.f
    tag = _case_tag(n)
    n1, n2 = n.n1, n.n2
    segs: list[Segment] = []
    if tag == "both_positive":
        u0 = _u0_both_positive(cc, n1, n2)
        segs.append(Segment(1, n1, u0 * d, a))
        if n2 > n1:
            segs.append(Segment(n1 + 1, n2, u0 * d * a ** (n1 - 1) * b, b))
        segs.append(Segment(n2 + 1, None,
                            u0 * d * a ** (n1 - 1) * b ** (n2 - n1) * c, c))
    elif tag == "n1_zero":
        u0 = _u0_n1_zero(cc, n2)
        segs.append(Segment(1, n2, u0 * e, b))
        segs.append(Segment(n2 + 1, None, u0 * e * b ** (n2 - 1) * c, c))
    elif tag == "both_zero":
        u0 = _u0_both_zero(cc)
        segs.append(Segment(1, None, u0 * f, c))
    elif tag == "no_uncompressed":
        u0 = _u0_no_uncompressed(cc, n1)
        segs.append(Segment(1, n1, u0 * d, a))
        segs.append(Segment(n1 + 1, None, u0 * d * a ** (n1 - 1) * b, b))
    elif tag == "all_compressed":
        u0 = _u0_all_compressed(cc)
        segs.append(Segment(1, None, u0 * e, b))
    else:  # never_transmit
        u0 = _u0_never_transmit(cc)
        segs.append(Segment(1, None, u0 * d, a))
    return StationaryDistribution(n=n, case_tag=tag, u0=float(u0),
                                  segments=tuple(segs))


def average_aosi(params: ModelParams, n) -> float:
    """Stationary mean age under threshold policy n."""
    n = _policy(n)
    cc = chain_constants(params)
    tag = _case_tag(n)
    if tag == "both_positive":
        u0 = _u0_both_positive(cc, n.n1, n.n2)
        return float(_mean_both_positive(cc, u0, n.n1, n.n2))
    if tag == "n1_zero":
        u0 = _u0_n1_zero(cc, n.n2)
        return float(_mean_n1_zero(cc, u0, n.n2))
    if tag == "both_zero":
        return float(_mean_both_zero(cc, _u0_both_zero(cc)))
    if tag == "no_uncompressed":
        u0 = _u0_no_uncompressed(cc, n.n1)
        return float(_mean_no_uncompressed(cc, u0, n.n1))
    if tag == "all_compressed":
        return float(_mean_all_compressed(cc, _u0_all_compressed(cc)))
    return float(_mean_never_transmit(cc, _u0_never_transmit(cc)))


def transmit_fractions(params: ModelParams, n) -> tuple[float, float]:
    """Stationary fractions of slots spent transmitting (compressed, uncompressed)."""
    n = _policy(n)
    cc = chain_constants(params)
    tag = _case_tag(n)
    if tag == "both_positive":
        u0 = _u0_both_positive(cc, n.n1, n.n2)
        fc, fu = _fractions_both_positive(cc, u0, n.n1, n.n2)
        return float(fc), float(fu)
    if tag == "n1_zero":
        u0 = _u0_n1_zero(cc, n.n2)
        fc, fu = _fractions_n1_zero(cc, u0, n.n2)
        return float(fc), float(fu)
    if tag == "both_zero":
        return 0.0, 1.0
    if tag == "no_uncompressed":
        u0 = _u0_no_uncompressed(cc, n.n1)
        return float(u0 * cc.d * cc.a ** (n.n1 - 1) / (1 - cc.b)), 0.0
    if tag == "all_compressed":
        u0 = _u0_all_compressed(cc)
        return float(u0 * (1 + cc.e / (1 - cc.b))), 0.0
    return 0.0, 0.0


def objective_F(params: ModelParams, n) -> float:
    """Average cost (mean age plus mean transmission energy) of policy n."""
    n = _policy(n)
    cc = chain_constants(params)
    lam1, lam2 = params.lambda1, params.lambda2
    tag = _case_tag(n)
    if tag == "both_positive":
        return float(_f_both_positive(cc, lam1, lam2, n.n1, n.n2))
    if tag == "n1_zero":
        return float(_f_n1_zero(cc, lam1, lam2, n.n2))
    if tag == "both_zero":
        return float(_f_both_zero(cc, lam2))
    if tag == "no_uncompressed":
        return float(_f_no_uncompressed(cc, lam1, n.n1))
    if tag == "all_compressed":
        return float(_f_all_compressed(cc, lam1))
    return float(_f_never_transmit(cc))


@dataclass(frozen=True)
class SteadyStateReport:
    """Steady-state summary of one policy: mean age, transmit fractions and
    the average-cost objective."""

    n: ThresholdPolicy
    avg_aosi: float
    frac_compressed: float
    frac_uncompressed: float
    objective: float

    def csv_row(self) -> list:
        return [self.n.n1, self.n.n2, self.avg_aosi,
                self.frac_compressed, self.frac_uncompressed, self.objective]


def evaluate_policy(params: ModelParams, n) -> SteadyStateReport:
    n = _policy(n)
    frac_c, frac_u = transmit_fractions(params, n)
    return SteadyStateReport(
        n=n,
        avg_aosi=average_aosi(params, n),
        frac_compressed=frac_c,
        frac_uncompressed=frac_u,
        objective=objective_F(params, n),
    )
