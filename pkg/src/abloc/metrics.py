"""Evaluation quantities reported for every run."""
import numpy as np


def _check_shapes(estimate, truth):
    estimate = np.asarray(estimate, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if estimate.shape != truth.shape:
        raise ValueError(f"shape mismatch: {estimate.shape} vs {truth.shape}")
    return estimate, truth


def mse(estimate, truth) -> float:
    """Squared error averaged over all time points and dimensions."""
    estimate, truth = _check_shapes(estimate, truth)
    return float(np.mean((estimate - truth) ** 2))


def mse_by_component(estimate, truth) -> np.ndarray:
    estimate, truth = _check_shapes(estimate, truth)
    return np.mean((estimate - truth) ** 2, axis=0)


def efficiency(mse_baseline: float, mse_achieved: float) -> float:
    """Relative MSE improvement over the baseline; negative if worse."""
    if mse_baseline <= 0:
        raise ValueError("baseline MSE must be positive")
    return (mse_baseline - mse_achieved) / mse_baseline


def achievement_ratio(eta_achieved: float, eta_bound: float) -> float:
    if eta_bound <= 0:
        raise ValueError("efficiency bound must be positive")
    return eta_achieved / eta_bound


def weight_comparison(learned, oracle):
    """Signed relative error per agent and the Pearson correlation."""
    learned = np.asarray(learned, dtype=float)
    oracle = np.asarray(oracle, dtype=float)
    if learned.shape != oracle.shape:
        raise ValueError("weight vectors differ in length")
    if learned.size < 2:
        raise ValueError("correlation needs at least two agents")
    rel = (learned - oracle) / oracle
    if np.std(learned) == 0 or np.std(oracle) == 0:
        corr = 1.0 if np.allclose(learned, oracle) else 0.0
    else:
        corr = float(np.clip(np.corrcoef(learned, oracle)[0, 1], -1.0, 1.0))
    return rel, corr
