"""Monte Carlo and matrix oracles for the threshold-policy age chain.

Both paths here are deliberately independent of the closed forms in
steady_state: the simulator steps the transition kernel one uniform draw per
slot, and brute_force_stationary solves the balance equations of the
truncated chain numerically. They exist to arbitrate the analytic formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from numba import njit

from .model import ModelParams, ThresholdPolicy, increment_prob
from .steady_state import InfiniteThreshold

__all__ = [
    "SimConfig",
    "SimEstimate",
    "SingularSystem",
    "simulate",
    "brute_force_stationary",
    "VISIT_CAP",
    "N_BATCHES",
]

# States >= VISIT_CAP are lumped into the last histogram bucket.
VISIT_CAP = 10000
# Batch count for batch-means standard errors (kept well above 30 so the
# error bars are trustworthy at the default horizons).
N_BATCHES = 50


class SingularSystem(RuntimeError):
    """The truncated balance system did not solve to tolerance."""


def _policy(n) -> ThresholdPolicy:
    if isinstance(n, ThresholdPolicy):
        return n
    return ThresholdPolicy(*n)


@dataclass(frozen=True)
class SimConfig:
    """Trajectory settings. burn_in defaults to horizon // 100.

    The PRNG is numpy's PCG64 (128-bit permuted congruential generator with
    fixed, documented multiplier constants), seeded explicitly; the chain
    consumes exactly one uniform draw per slot, so runs are reproducible
    bit-for-bit for a given (horizon, burn_in, seed).
    """

    horizon: int
    burn_in: int | None = None
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.horizon, int) or self.horizon < 1:
            raise ValueError(f"horizon={self.horizon!r} must be a positive integer")
        if self.burn_in is None:
            object.__setattr__(self, "burn_in", self.horizon // 100)
        if not isinstance(self.burn_in, int) or self.burn_in < 0:
            raise ValueError(f"burn_in={self.burn_in!r} must be a non-negative integer")
        if self.burn_in >= self.horizon:
            raise ValueError(
                f"burn_in={self.burn_in} must be smaller than horizon={self.horizon}"
            )
        if not isinstance(self.seed, int):
            raise ValueError(f"seed={self.seed!r} must be an integer")


@dataclass(frozen=True, eq=False)
class SimEstimate:
    """Post-burn-in time averages with batch-means standard errors."""

    n: ThresholdPolicy
    horizon: int
    burn_in: int
    seed: int
    avg_cost: float
    avg_aosi: float
    frac_compressed: float
    frac_uncompressed: float
    se_cost: float
    se_aosi: float
    se_frac_compressed: float
    se_frac_uncompressed: float
    n_batches: int
    visit_counts: np.ndarray

    def to_json_dict(self) -> dict:
        counts = self.visit_counts
        nz = np.nonzero(counts)[0]
        trimmed = counts[: int(nz[-1]) + 1] if nz.size else counts[:1]
        return {
            "n1": _json_threshold(self.n.n1),
            "n2": _json_threshold(self.n.n2),
            "horizon": self.horizon,
            "burn_in": self.burn_in,
            "seed": self.seed,
            "avg_cost": self.avg_cost,
            "avg_aosi": self.avg_aosi,
            "frac_compressed": self.frac_compressed,
            "frac_uncompressed": self.frac_uncompressed,
            "se_cost": self.se_cost,
            "se_aosi": self.se_aosi,
            "se_frac_compressed": self.se_frac_compressed,
            "se_frac_uncompressed": self.se_frac_uncompressed,
            "n_batches": self.n_batches,
            "visit_cap": VISIT_CAP,
            "visit_counts": [int(x) for x in trimmed],
        }


def _json_threshold(x):
    return "inf" if math.isinf(x) else int(x)


@njit(cache=True)
def _chain_stats(u, g0, ga, gb, gc, n1, n2, burn_in, n_batches, batch_len,
                 visit_cap):
    t_total = u.shape[0]
    bsum_s = np.zeros(n_batches)
    bcnt_c = np.zeros(n_batches)
    bcnt_u = np.zeros(n_batches)
    visits = np.zeros(visit_cap + 1, dtype=np.int64)
    tot_s = 0.0
    tot_c = 0
    tot_u = 0
    s = 0
    for t in range(t_total):
        if s < n1:
            act = 0
        elif s < n2:
            act = 1
        else:
            act = 2
        if s == 0:
            g = g0
        elif act == 0:
            g = ga
        elif act == 1:
            g = gb
        else:
            g = gc
        if t >= burn_in:
            tot_s += s
            if act == 1:
                tot_c += 1
            elif act == 2:
                tot_u += 1
            if s < visit_cap:
                visits[s] += 1
            else:
                visits[visit_cap] += 1
            j = (t - burn_in) // batch_len
            if j < n_batches:
                bsum_s[j] += s
                if act == 1:
                    bcnt_c[j] += 1.0
                elif act == 2:
                    bcnt_u[j] += 1.0
        if u[t] < g:
            s += 1
        else:
            s = 0
    return tot_s, tot_c, tot_u, visits, bsum_s, bcnt_c, bcnt_u


def simulate(params: ModelParams, n, config: SimConfig) -> SimEstimate:
    """Run one trajectory of the kernel from s(0) = 0 under policy n.

    Estimates are time averages over slots [burn_in, horizon); avg_cost is
    composed from the other three estimates, so the cost identity
    avg_cost = avg_aosi + lambda1*frac_c + lambda2*frac_u holds exactly.
    """
    n = _policy(n)
    rng = np.random.Generator(np.random.PCG64(config.seed))
    draws = rng.random(config.horizon)
    sentinel = config.horizon + 2  # ages never exceed the horizon
    n1 = int(min(n.n1, sentinel))
    n2 = int(min(n.n2, sentinel))
    g0 = increment_prob(params, 0, n.action(0))
    ga = increment_prob(params, 1, 0)
    gb = increment_prob(params, 1, 1)
    gc = increment_prob(params, 1, 2)
    n_samples = config.horizon - config.burn_in
    n_batches = min(N_BATCHES, n_samples)
    batch_len = n_samples // n_batches
    tot_s, tot_c, tot_u, visits, bsum_s, bcnt_c, bcnt_u = _chain_stats(
        draws, g0, ga, gb, gc, n1, n2, config.burn_in, n_batches, batch_len,
        VISIT_CAP,
    )
    avg_aosi = tot_s / n_samples
    frac_c = tot_c / n_samples
    frac_u = tot_u / n_samples
    avg_cost = avg_aosi + params.lambda1 * frac_c + params.lambda2 * frac_u
    bmean_s = bsum_s / batch_len
    bfrac_c = bcnt_c / batch_len
    bfrac_u = bcnt_u / batch_len
    bcost = bmean_s + params.lambda1 * bfrac_c + params.lambda2 * bfrac_u

    def se(batch_means):
        if n_batches < 2:
            return math.nan
        return float(np.std(batch_means, ddof=1) / math.sqrt(n_batches))

    return SimEstimate(
        n=n,
        horizon=config.horizon,
        burn_in=config.burn_in,
        seed=config.seed,
        avg_cost=float(avg_cost),
        avg_aosi=float(avg_aosi),
        frac_compressed=float(frac_c),
        frac_uncompressed=float(frac_u),
        se_cost=se(bcost),
        se_aosi=se(bmean_s),
        se_frac_compressed=se(bfrac_c),
        se_frac_uncompressed=se(bfrac_u),
        n_batches=n_batches,
        visit_counts=visits,
    )


def _increment_vector(params: ModelParams, n: ThresholdPolicy, s_cap: int) -> np.ndarray:
    states = np.arange(s_cap + 1)
    r = np.full(s_cap + 1, params.r1)
    r[0] = 1.0 - params.r0
    mult = np.ones(s_cap + 1)
    mult[(states >= n.n1) & (states < n.n2)] = 1.0 - params.rho * params.p
    mult[states >= n.n2] = 1.0 - params.rho * params.q
    return r * mult


def brute_force_stationary(params: ModelParams, n, s_cap: int = 2000) -> np.ndarray:
    """Stationary law of the truncated chain, solved from its balance equations.

    The chain on {0, ..., s_cap} keeps the reset column and super-diagonal of
    the exact kernel and lumps the tail into a self-loop at s_cap, so entry
    s_cap carries the whole tail mass sum_{i >= s_cap} u(i). Solved as a
    sparse linear system with one balance row replaced by normalization;
    raises SingularSystem if the residual ||uP - u||_inf exceeds 1e-13.
    """
    n = _policy(n)
    if not n.is_finite:
        raise InfiniteThreshold(
            "brute_force_stationary needs finite thresholds inside the truncation"
        )
    if s_cap < n.n2 + 2:
        raise ValueError(f"s_cap={s_cap} must exceed n2={n.n2} + 1")
    m = s_cap + 1
    g = _increment_vector(params, n, s_cap)
    rows = np.concatenate([np.arange(m - 1), [m - 1], np.arange(m)])
    cols = np.concatenate([np.arange(1, m), [m - 1], np.zeros(m, dtype=int)])
    data = np.concatenate([g[:-1], [g[-1]], 1.0 - g])
    P = sp.coo_matrix((data, (rows, cols)), shape=(m, m)).tocsr()
    A = (P.T - sp.identity(m, format="csr")).tolil()
    A[m - 1, :] = 1.0
    b = np.zeros(m)
    b[m - 1] = 1.0
    u = spla.spsolve(A.tocsc(), b)
    residual = float(np.max(np.abs(u @ P - u)))
    if not np.all(np.isfinite(u)) or residual > 1e-13:
        raise SingularSystem(
            f"balance solve residual {residual:.3e} exceeds 1e-13"
        )
    return u
