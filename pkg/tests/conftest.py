"""Shared fixtures and random-instance samplers for the test suite."""

import numpy as np
import pytest

from aosisched import ModelParams

# Parameter set used throughout the numerical study and the figures.
SV = dict(r0=0.1, r1=0.9, rho=0.1, p=0.5, q=0.9, lambda1=1.0, lambda2=2.0)


@pytest.fixture
def sv_params() -> ModelParams:
    return ModelParams(**SV)


def random_params(rng: np.random.Generator, order_lambdas: bool = True,
                  f_mode: str = "kernel") -> ModelParams:
    """Draw a valid parameter set.

    r1 is capped at 0.95 so every induced chain mixes fast enough for the
    truncated oracles; r0 is drawn so the persistence condition r0 + r1 >= 1
    holds; q >= p always. With order_lambdas the energies follow the usual
    modeling assumption lambda2 >= lambda1, otherwise both are free.
    """
    r1 = rng.uniform(0.5, 0.95)
    r0 = rng.uniform(1.0 - r1, 1.0)
    rho = rng.uniform(0.05, 1.0)
    p = rng.uniform(0.0, 1.0)
    q = rng.uniform(p, 1.0)
    lam1 = rng.uniform(0.0, 6.0)
    lam2 = rng.uniform(lam1, 9.0) if order_lambdas else rng.uniform(0.0, 9.0)
    return ModelParams(r0=r0, r1=r1, rho=rho, p=p, q=q,
                       lambda1=lam1, lambda2=lam2, f_mode=f_mode)


def random_thresholds(rng: np.random.Generator, hi: int = 20) -> tuple[int, int]:
    """Draw a finite threshold pair 0 <= n1 <= n2 <= hi."""
    n1 = int(rng.integers(0, hi + 1))
    n2 = int(rng.integers(n1, hi + 1))
    return n1, n2
