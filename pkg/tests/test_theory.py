import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abloc.errors import InfeasibleError
from abloc.theory import (
    decision_for_agents,
    decision_rule,
    efficiency_bound,
    learnability_ratio,
    mse_baseline,
    mse_optimal,
    optimal_weights,
    residual_variance,
    sample_requirement,
    simplified_bound,
)
from abloc.types import AgentSpec

agent_st = st.builds(
    AgentSpec,
    lam=st.floats(0, 1),
    beta=st.floats(0, 2),
    sigma=st.floats(0.01, 2),
)


def test_learnability_ratio_examples():
    assert learnability_ratio(0.12, 0.04) == pytest.approx(0.75)
    assert learnability_ratio(0, 1) == 0
    assert learnability_ratio(1, 0) == 1
    with pytest.raises(InfeasibleError):
        learnability_ratio(0, 0)


@pytest.mark.parametrize(
    "agent,expected",
    [
        (AgentSpec(0.75, 0.40, 0.10), 0.050),
        (AgentSpec(0.60, 0.45, 0.12), 0.0954),
        (AgentSpec(0.50, 0.50, 0.15), 0.1475),
        (AgentSpec(0.30, 0.60, 0.20), 0.292),
        (AgentSpec(1.0, 3.0, 0.10), 0.01),
    ],
)
def test_residual_variance(agent, expected):
    assert residual_variance(agent) == pytest.approx(expected, abs=5e-5)


def test_optimal_weights_examples():
    w = optimal_weights([0.050, 0.0954, 0.1475, 0.292])
    # exact inverse-variance normalisation (the total precision is 40.687)
    np.testing.assert_allclose(w, [0.49156, 0.25763, 0.16663, 0.08417], atol=5e-5)
    np.testing.assert_allclose(optimal_weights([0.3] * 5), np.full(5, 0.2))
    np.testing.assert_array_equal(optimal_weights([7.0]), [1.0])
    with pytest.raises(ValueError):
        optimal_weights([0.1, 0.0])


def test_mse_examples(bench_agents):
    assert mse_baseline(bench_agents) == pytest.approx(0.0660, abs=0.0003)
    assert mse_baseline([AgentSpec(0.5, 0.0, 1.0)]) == pytest.approx(1.0)
    assert mse_baseline([AgentSpec(0.5, 0.0, 0.3)] * 5) == pytest.approx(0.09 / 5)
    v = [residual_variance(a) for a in bench_agents]
    assert mse_optimal(v) == pytest.approx(0.0244, abs=0.0002)
    assert mse_optimal([0.2]) == pytest.approx(0.2)
    assert mse_optimal([0.2, 0.2]) == pytest.approx(0.1)


def test_efficiency_bound_for_benchmark_agents(bench_agents):
    rep = efficiency_bound(bench_agents)
    assert rep.eta_bound == pytest.approx(0.630, abs=0.003)
    assert rep.eta_bound == pytest.approx((rep.mse_baseline - rep.mse_optimal) / rep.mse_baseline)
    # 1 / (100 + 69.44 + 44.44 + 25)
    assert rep.oracle_mse_noise_only == pytest.approx(0.00419, abs=0.0001)
    w = rep.w_star
    lam = np.array([a.lam for a in bench_agents])
    b2 = np.array([a.beta**2 for a in bench_agents])
    s2 = np.array([a.sigma**2 for a in bench_agents])
    assert rep.eta_ratio_form == pytest.approx(np.dot(w, lam * b2) / np.dot(w, b2 + s2))


def test_nothing_learnable_means_no_gain():
    rep = efficiency_bound([AgentSpec(0.0, 0.5, 0.2)] * 3)
    np.testing.assert_allclose(rep.w_star, np.full(3, 1 / 3))
    assert rep.eta_bound == pytest.approx(0.0, abs=1e-14)


def test_simplified_bound_examples():
    assert simplified_bound(0.5, 1, 1) == pytest.approx(0.25)
    assert simplified_bound(0.0, 3.0, 0.5) == 0
    assert simplified_bound(1.0, 2.0, 0.0) == 1
    with pytest.raises(InfeasibleError):
        simplified_bound(0.5, 0.0, 0.0)


def test_sample_requirement_direct_evaluation():
    lam_bar = np.mean([0.75, 0.60, 0.50, 0.30])
    direct = 1.0 * (3 + 40) / (0.1**2 * lam_bar**2) * math.log(4 / 0.05)
    n = sample_requirement(1.0, 3, [10] * 4, 0.1, lam_bar, 0.05, 4)
    assert n == math.ceil(direct) == 65221
    assert n - 1 < direct <= n


def test_sample_requirement_scaling():
    base = sample_requirement(1.0, 3, [10, 10], 0.2, 0.5, 0.1, 2)
    half = sample_requirement(1.0, 3, [10, 10], 0.1, 0.5, 0.1, 2)
    assert half / base == pytest.approx(4, rel=1e-3)
    small = sample_requirement(1e3, 2, [2], 0.5, 1.0, 0.5, 2)
    big = sample_requirement(1e3, 4, [4], 0.5, 1.0, 0.5, 2)
    assert big / small == pytest.approx(2, rel=1e-3)
    with pytest.raises(InfeasibleError):
        sample_requirement(1.0, 3, [10], 0.1, 0.0, 0.05, 1)
    with pytest.raises(ValueError):
        sample_requirement(1.0, 3, [10], 1.5, 0.5, 0.05, 1)


def test_decision_rule(bench_agents):
    rec = decision_for_agents(bench_agents, T=2000, d=3)
    assert rec.decision == "learn_bias"
    assert rec.checks["data"]["threshold"] == 430
    low = decision_rule(0.1, 0.243, 0.0217, 2000, 3, [10] * 4)
    assert low.decision == "simple_average" and low.failed == ["learnability"]
    short = decision_rule(0.5375, 0.243, 0.0217, 100, 3, [10] * 4)
    assert short.decision == "simple_average" and short.failed == ["data"]


@settings(max_examples=200, deadline=None)
@given(st.lists(agent_st, min_size=1, max_size=6))
def test_bound_lies_in_unit_interval(agents):
    eta = efficiency_bound(agents).eta_bound
    assert -1e-12 <= eta < 1


@settings(max_examples=200, deadline=None)
@given(st.lists(agent_st, min_size=1, max_size=6), st.data())
def test_bound_monotone_in_learnability(agents, data):
    i = data.draw(st.integers(0, len(agents) - 1))
    new_lam = data.draw(st.floats(agents[i].lam, 1))
    bumped = list(agents)
    bumped[i] = AgentSpec(new_lam, agents[i].beta, agents[i].sigma)
    assert efficiency_bound(bumped).eta_bound >= efficiency_bound(agents).eta_bound - 1e-12


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0.01, 5), min_size=1, max_size=8), st.integers(0, 2**32 - 1))
def test_closed_form_beats_random_simplex_weights(v, seed):
    v = np.array(v)
    best = mse_optimal(v)
    W = np.random.default_rng(seed).dirichlet(np.ones(len(v)), size=1000)
    assert np.all(best <= (W**2 * v).sum(axis=1) + 1e-12)
    w = optimal_weights(v)
    assert w.sum() == pytest.approx(1.0, abs=1e-12)
    order = np.argsort(v, kind="stable")
    assert np.all(np.diff(w[order]) <= 1e-15)
