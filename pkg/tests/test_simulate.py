"""Monte Carlo estimator: determinism, internal identities, agreement."""

import json
import math

import numpy as np
import pytest

from aosisched import (
    ModelParams,
    SimConfig,
    ThresholdPolicy,
    average_aosi,
    objective_F,
    simulate,
    stationary,
    transmit_fractions,
)
from conftest import random_params, random_thresholds


def test_seeded_runs_are_identical(sv_params):
    cfg = SimConfig(horizon=200_000, seed=42)
    a = simulate(sv_params, (3, 4), cfg)
    b = simulate(sv_params, (3, 4), cfg)
    assert a.avg_cost == b.avg_cost
    assert a.avg_aosi == b.avg_aosi
    assert a.se_cost == b.se_cost
    assert np.array_equal(a.visit_counts, b.visit_counts)
    c = simulate(sv_params, (3, 4), SimConfig(horizon=200_000, seed=43))
    assert c.avg_cost != a.avg_cost


def test_cost_identity_is_exact():
    rng = np.random.default_rng(410)
    for _ in range(5):
        params = random_params(rng)
        n = random_thresholds(rng, hi=6)
        est = simulate(params, n, SimConfig(horizon=100_000, seed=7))
        composed = (est.avg_aosi + params.lambda1 * est.frac_compressed
                    + params.lambda2 * est.frac_uncompressed)
        assert est.avg_cost == composed  # identical float composition


def test_visit_counts_account_for_every_slot(sv_params):
    cfg = SimConfig(horizon=50_000, burn_in=1_000, seed=5)
    est = simulate(sv_params, (2, 6), cfg)
    assert int(np.sum(est.visit_counts)) == cfg.horizon - cfg.burn_in
    assert est.burn_in == 1_000


def test_default_burn_in(sv_params):
    est = simulate(sv_params, (3, 4), SimConfig(horizon=100_000, seed=1))
    assert est.burn_in == 1_000


def test_visit_frequencies_near_stationary(sv_params):
    horizon = 1_000_000
    est = simulate(sv_params, (3, 4), SimConfig(horizon=horizon, seed=2024))
    dist = stationary(sv_params, (3, 4))
    kept = horizon - est.burn_in
    freq = est.visit_counts / kept
    support = np.arange(len(est.visit_counts))
    l1 = float(np.sum(np.abs(freq - dist.pmf(support))))
    assert l1 <= 5.0 / math.sqrt(kept), f"L1 distance {l1:.2e}"


def test_three_sigma_agreement(sv_params):
    est = simulate(sv_params, (3, 4), SimConfig(horizon=2_000_000, seed=99))
    fc, fu = transmit_fractions(sv_params, (3, 4))
    assert abs(est.avg_aosi - average_aosi(sv_params, (3, 4))) <= 3 * est.se_aosi
    assert abs(est.frac_compressed - fc) <= 3 * est.se_frac_compressed
    assert abs(est.frac_uncompressed - fu) <= 3 * est.se_frac_uncompressed


def test_pinned_source_never_ages():
    params = ModelParams(r0=1.0, r1=0.9, rho=0.1, p=0.5, q=0.9,
                         lambda1=1.0, lambda2=2.0)
    est = simulate(params, (2, 5), SimConfig(horizon=50_000, seed=4))
    assert est.avg_aosi == 0.0
    assert est.frac_uncompressed == 0.0  # age never reaches n2


def test_objective_grid_sample_within_3se(sv_params):
    # spot-check the closed-form average cost against long simulations on a
    # sample of the threshold grid
    rng = np.random.default_rng(411)
    for k in range(6):
        n1 = int(rng.integers(0, 51))
        n2 = int(rng.integers(n1, 51))
        est = simulate(sv_params, (n1, n2),
                       SimConfig(horizon=10_000_000, seed=500 + k))
        want = objective_F(sv_params, (n1, n2))
        assert abs(est.avg_cost - want) <= 3 * est.se_cost, (n1, n2)


def test_infinite_thresholds(sv_params):
    est = simulate(sv_params, (math.inf, math.inf),
                   SimConfig(horizon=100_000, seed=3))
    assert est.frac_compressed == 0.0
    assert est.frac_uncompressed == 0.0
    assert est.avg_cost == est.avg_aosi
    est = simulate(sv_params, (2, math.inf), SimConfig(horizon=100_000, seed=3))
    assert est.frac_uncompressed == 0.0
    assert est.frac_compressed > 0.0


def test_config_validation():
    with pytest.raises(ValueError):
        SimConfig(horizon=0)
    with pytest.raises(ValueError):
        SimConfig(horizon=100, burn_in=100)
    with pytest.raises(ValueError):
        SimConfig(horizon=100, burn_in=-1)


def test_estimate_serializes(sv_params):
    est = simulate(sv_params, (3, math.inf), SimConfig(horizon=20_000, seed=8))
    blob = json.dumps(est.to_json_dict())
    back = json.loads(blob)
    assert back["n2"] == "inf"
    assert back["avg_cost"] == est.avg_cost
    assert back["visit_counts"][0] == int(est.visit_counts[0])


def test_policy_object_and_tuple_agree(sv_params):
    cfg = SimConfig(horizon=50_000, seed=11)
    a = simulate(sv_params, (1, 4), cfg)
    b = simulate(sv_params, ThresholdPolicy(1, 4), cfg)
    assert a.avg_cost == b.avg_cost
