import numpy as np
import pytest

from abloc import generate_dataset, benchmark_config
from abloc.baselines import learnable_oracle_combine, oracle_combine, uniform_average
from abloc.metrics import achievement_ratio, efficiency, mse, mse_by_component, weight_comparison
from abloc.types import AgentSpec, ExperimentConfig


def test_uniform_average_examples(rng):
    Y = rng.standard_normal((1, 30, 3))
    np.testing.assert_array_equal(uniform_average(Y), Y[0])
    np.testing.assert_allclose(uniform_average(np.stack([Y[0], -Y[0]])), 0.0, atol=1e-15)
    with pytest.raises(ValueError):
        uniform_average(Y[0])


def test_oracle_weights_use_inverse_noise_variance(bench_data, bench_agents):
    _, w = oracle_combine(bench_data, [a.sigma for a in bench_agents])
    prec = np.array([100, 1 / 0.0144, 1 / 0.0225, 25])
    np.testing.assert_allclose(w, prec / prec.sum(), rtol=1e-12)
    np.testing.assert_allclose(w, [0.4186, 0.2907, 0.1860, 0.1046], atol=1e-4)


def test_oracle_equal_noise_is_uniform():
    cfg = ExperimentConfig(agents=[AgentSpec(0.4, 0.3, 0.2)] * 3, T=200)
    _, w = oracle_combine(generate_dataset(cfg), [0.2] * 3)
    np.testing.assert_allclose(w, np.full(3, 1 / 3))


def test_oracle_mse_close_to_noise_only_fusion(bench_data, bench_agents):
    est, _ = oracle_combine(bench_data, [a.sigma for a in bench_agents])
    expected = 1 / sum(1 / a.sigma**2 for a in bench_agents)
    assert mse(est, bench_data.theta) == pytest.approx(expected, rel=0.15)


def test_oracle_variants(bench_data, bench_agents):
    est, w_emp = oracle_combine(bench_data, empirical=True)
    assert w_emp.sum() == pytest.approx(1.0)
    learn_est, w_learn = learnable_oracle_combine(bench_data, bench_agents)
    # removing only f leaves nu + eps, so it sits between the full oracle and the baseline
    full, _ = oracle_combine(bench_data, [a.sigma for a in bench_agents])
    base = uniform_average(bench_data.observations)
    th = bench_data.theta
    assert mse(full, th) < mse(learn_est, th) < mse(base, th)


def test_oracle_dominates_baseline_across_seeds():
    for seed in range(20):
        data = generate_dataset(benchmark_config(seed=seed))
        est, _ = oracle_combine(data, [0.10, 0.12, 0.15, 0.20])
        assert mse(est, data.theta) <= mse(uniform_average(data.observations), data.theta)


def test_oracle_residual_uncorrelated_with_covariates(bench_data, bench_agents):
    est, _ = oracle_combine(bench_data, [a.sigma for a in bench_agents])
    resid = est - bench_data.theta
    for i in range(bench_data.K):
        for c in range(9):  # the last column is constant
            for j in range(bench_data.d):
                r = np.corrcoef(bench_data.covariates[i, :, c], resid[:, j])[0, 1]
                assert abs(r) < 0.05


def test_mse_examples(rng):
    th = rng.standard_normal((40, 3))
    assert mse(th, th) == 0
    assert mse(th + 0.3, th) == pytest.approx(0.09)
    with pytest.raises(ValueError):
        mse(th[:, :2], th)


def test_mse_by_component(rng):
    est, th = rng.standard_normal((50, 3)), rng.standard_normal((50, 3))
    comp = mse_by_component(est, th)
    assert np.mean(comp) == pytest.approx(mse(est, th), abs=1e-12)
    col = rng.standard_normal(50)
    e = np.column_stack([col] * 3)
    c = mse_by_component(e, np.zeros_like(e))
    assert c[0] == c[1] == c[2]
    # the published component baselines average to the published scalar
    assert np.mean([0.0506, 0.0460, 0.0398]) == pytest.approx(0.0455, abs=1e-4)


def test_efficiency_examples():
    assert efficiency(0.0455, 0.0316) == pytest.approx(0.30549, abs=1e-5)
    assert efficiency(0.2, 0.2) == 0
    assert efficiency(0.2, 0.0) == 1
    assert efficiency(0.2, 0.3) < 0
    assert efficiency(2.0, 1.3) == pytest.approx(efficiency(0.02, 0.013))
    with pytest.raises(ValueError):
        efficiency(0.0, 0.1)


def test_achievement_ratio_examples():
    assert achievement_ratio(0.304, 0.619) == pytest.approx(0.491, abs=5e-4)
    assert achievement_ratio(0.4, 0.4) == 1
    assert achievement_ratio(0.304, 0.630) == pytest.approx(0.483, abs=5e-4)
    with pytest.raises(ValueError):
        achievement_ratio(0.3, 0.0)


def test_weight_comparison_examples():
    w = np.array([0.4, 0.3, 0.2, 0.1])
    rel, corr = weight_comparison(w, w)
    assert np.all(rel == 0) and corr == pytest.approx(1.0)
    learned = [0.452, 0.282, 0.173, 0.093]
    oracle = [0.416, 0.298, 0.183, 0.102]
    rel, corr = weight_comparison(learned, oracle)
    np.testing.assert_allclose(rel, [0.087, -0.054, -0.055, -0.088], atol=5e-4)
    # recomputed from the published table; the quoted 0.999 is rounded up
    assert corr == pytest.approx(0.9944, abs=1e-4)
    assert -1 <= weight_comparison([0.1, 0.9], [0.9, 0.1])[1] <= 1
    with pytest.raises(ValueError):
        weight_comparison([1.0], [1.0])
