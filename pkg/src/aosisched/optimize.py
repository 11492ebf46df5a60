"""Minimize the average-cost objective F over threshold pairs.

Exhaustive grid search is the ground truth: it evaluates every pair
0 <= n1 <= n2 <= n_max plus the limiting families (n1, inf) and (inf, inf),
all in closed form, and refuses to answer when the argmin sits on the grid
boundary. Coordinate descent is the fast path the objective's shape suggests,
but lattice unimodality is unproven, so the exhaustive result always wins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ModelParams, ThresholdPolicy, chain_constants
from .steady_state import (
    _f_all_compressed,
    _f_both_positive,
    _f_both_zero,
    _f_n1_zero,
    _f_never_transmit,
    _f_no_uncompressed,
    objective_F,
)

__all__ = [
    "OptimizeResult",
    "BoundaryOptimum",
    "optimize_exhaustive",
    "optimize_descent",
    "find_optimum",
    "grid_values",
]


class BoundaryOptimum(RuntimeError):
    """The argmin touches n_max, so the grid was too small to trust."""

    def __init__(self, best: ThresholdPolicy, f_value: float, n_max: int):
        self.best = best
        self.f_value = f_value
        self.n_max = n_max
        super().__init__(
            f"argmin {best.as_tuple()} touches n_max={n_max}; enlarge the grid"
        )


@dataclass(frozen=True)
class OptimizeResult:
    best: ThresholdPolicy
    f_value: float
    evaluations: int
    method: str


def _candidate_groups(params: ModelParams, n_max: int):
    """Yield (n1_array, n2_array, f_array) across all candidate families."""
    cc = chain_constants(params)
    lam1, lam2 = params.lambda1, params.lambda2
    inf = math.inf

    yield np.array([0]), np.array([0]), np.atleast_1d(_f_both_zero(cc, lam2))

    n2 = np.arange(1, n_max + 1)
    yield np.zeros(n_max, dtype=int), n2, _f_n1_zero(cc, lam1, lam2, n2)

    i, j = np.triu_indices(n_max)
    n1 = i + 1
    n2 = j + 1
    yield n1, n2, _f_both_positive(cc, lam1, lam2, n1, n2)

    yield (np.array([0]), np.array([inf]),
           np.atleast_1d(_f_all_compressed(cc, lam1)))

    n1 = np.arange(1, n_max + 1)
    yield n1, np.full(n_max, inf), _f_no_uncompressed(cc, lam1, n1)

    yield (np.array([inf]), np.array([inf]),
           np.atleast_1d(_f_never_transmit(cc)))


def optimize_exhaustive(params: ModelParams, n_max: int = 200) -> OptimizeResult:
    """Global minimum of F over the finite grid plus the infinite families.

    Ties are broken toward the lexicographically smallest (n1, n2), with
    infinity ordered after every finite threshold. Raises BoundaryOptimum if
    any finite coordinate of the argmin equals n_max.
    """
    if n_max < 1:
        raise ValueError(f"n_max={n_max} must be >= 1")
    groups = list(_candidate_groups(params, n_max))
    evaluations = sum(g[2].size for g in groups)
    best_f = min(float(g[2].min()) for g in groups)
    ties = []
    for n1s, n2s, fs in groups:
        for k in np.nonzero(fs == best_f)[0]:
            ties.append((float(n1s[k]), float(n2s[k])))
    n1, n2 = min(ties)
    best = ThresholdPolicy(n1, n2)
    f_value = objective_F(params, best)
    if (not math.isinf(best.n1) and best.n1 == n_max) or \
            (not math.isinf(best.n2) and best.n2 == n_max):
        raise BoundaryOptimum(best, f_value, n_max)
    return OptimizeResult(best=best, f_value=f_value,
                          evaluations=evaluations, method="exhaustive")


def find_optimum(params: ModelParams, n_max: int = 200,
                 max_doublings: int = 3) -> OptimizeResult:
    """optimize_exhaustive with automatic grid enlargement (n_max doubled up
    to max_doublings times) when the argmin lands on the boundary."""
    for attempt in range(max_doublings + 1):
        try:
            return optimize_exhaustive(params, n_max)
        except BoundaryOptimum:
            if attempt == max_doublings:
                raise
            n_max *= 2
    raise AssertionError("unreachable")


def optimize_descent(params: ModelParams, init=(0, 0),
                     n_max: int = 200) -> OptimizeResult:
    """Integer coordinate descent from init: move n1 then n2 by +-1 while F
    strictly decreases; stops at a lattice-local minimum."""
    if isinstance(init, ThresholdPolicy):
        init = init.as_tuple()
    n1, n2 = init
    if not (isinstance(n1, int) and isinstance(n2, int)):
        raise ValueError("descent needs a finite integer initial point")
    if not (0 <= n1 <= n2 <= n_max):
        raise ValueError(f"init {init} outside the grid [0, {n_max}]")
    cache: dict[tuple, float] = {}
    evaluations = 0

    def f(point) -> float:
        nonlocal evaluations
        if point not in cache:
            cache[point] = objective_F(params, point)
            evaluations += 1
        return cache[point]

    cur = (n1, n2)
    f_cur = f(cur)
    improved = True
    while improved:
        improved = False
        for coord in (0, 1):
            while True:
                moves = []
                for step in (1, -1):
                    cand = list(cur)
                    cand[coord] += step
                    cand = tuple(cand)
                    if 0 <= cand[0] <= cand[1] <= n_max:
                        moves.append((f(cand), cand))
                if not moves:
                    break
                f_new, cand = min(moves)
                if f_new < f_cur:
                    cur, f_cur = cand, f_new
                    improved = True
                else:
                    break
    best = ThresholdPolicy(*cur)
    if cur[0] == n_max or cur[1] == n_max:
        raise BoundaryOptimum(best, f_cur, n_max)
    return OptimizeResult(best=best, f_value=f_cur,
                          evaluations=evaluations, method="coordinate_descent")


def grid_values(params: ModelParams, n_max: int) -> list[tuple]:
    """All (n1, n2, F) triples the exhaustive search evaluates, in
    deterministic (n1, n2) lexicographic order; for heat-map style exports."""
    rows = []
    for n1s, n2s, fs in _candidate_groups(params, n_max):
        for k in range(fs.size):
            rows.append((float(n1s[k]), float(n2s[k]), float(fs[k])))
    rows.sort(key=lambda t: (t[0], t[1]))
    return rows
