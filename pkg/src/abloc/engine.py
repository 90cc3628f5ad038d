"""Alternating bias learning and inverse-variance weighting.

Each iteration fits a ridge model of every agent's residual against its
covariates, subtracts a shrunk copy of the prediction, re-estimates the
agents' error variances, moves the weights towards inverse-variance
weights and recombines. The iterate with the lowest validation score is
kept.
"""
from __future__ import annotations

import logging

import numpy as np

from . import kernels
from .errors import NumericError, SingularMatrixError
from .types import AblocParams, AblocState, BiasModel, Dataset, ExperimentConfig, IterationRecord, Snapshot

log = logging.getLogger(__name__)


def schedule_values(k: int, alpha0: float, params: AblocParams | None = None):
    """Shrinkage and ridge penalty for iteration ``k`` (1-based)."""
    if k < 1:
        raise ValueError(f"iteration index must be >= 1, got {k}")
    p = params or AblocParams(alpha0=alpha0)
    gamma = min(p.shrink_base + p.shrink_step * k, p.shrink_cap)
    alpha_k = alpha0 * 5.0 / (1.0 + k / 3.0)
    return gamma, alpha_k


def split_indices(T: int, fraction: float, mode: str = "contiguous", seed: int = 0):
    """Train and validation time indices.

    ``contiguous`` takes the first ``floor(fraction * T)`` points for
    training. ``random`` draws a seeded permutation (both index sets are
    returned sorted).
    """
    n_train = int(np.floor(fraction * T))
    if n_train < 1 or n_train >= T:
        raise ValueError(f"split leaves an empty set: T={T}, fraction={fraction}")
    if mode == "contiguous":
        return np.arange(n_train), np.arange(n_train, T)
    if mode == "random":
        perm = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(2**31 - 1,))).permutation(T)
        return np.sort(perm[:n_train]), np.sort(perm[n_train:])
    raise ValueError(f"unknown split mode {mode!r}")


def learn_bias_step(observations, covariates, theta_hat, train_idx, k, params: AblocParams, gram=None):
    """Fit per-agent bias models to current residuals.

    Returns the fitted ``BiasModel`` list and shrunk predictions of shape
    ``(K, T, d)`` over all time points. ``gram`` may carry precomputed
    training Gram matrices ``(K, p, p)``.
    """
    theta_hat = np.asarray(theta_hat, dtype=np.float64)
    if not np.all(np.isfinite(theta_hat)):
        raise NumericError("current estimate contains non-finite values")
    train_idx = np.ascontiguousarray(train_idx, dtype=np.int64)
    if train_idx.size == 0:
        raise ValueError("training index set is empty")
    gamma, alpha_k = schedule_values(k, params.alpha0, params)
    residuals = np.ascontiguousarray(observations - theta_hat[None])
    if gram is None:
        gram = kernels.gram(covariates, train_idx)
    xtr = kernels.cross_products(covariates, residuals, train_idx)
    coef, ok = kernels.batched_ridge_solve(gram, xtr, alpha_k)
    if not ok:
        raise SingularMatrixError(f"ridge system singular at iteration {k} (alpha={alpha_k})")
    models = [BiasModel(coef=coef[i].T.copy(), alpha_used=alpha_k) for i in range(coef.shape[0])]
    predictions = gamma * kernels.predict(covariates, coef)
    return models, predictions


def estimate_variances(corrected, theta_hat) -> np.ndarray:
    """Mean over time of the squared distance between each agent and the estimate."""
    return kernels.residual_power(np.ascontiguousarray(corrected), np.ascontiguousarray(theta_hat))


def update_weights(variances, prev, damping_new: float = 0.7, floor: float = 1e-10) -> np.ndarray:
    prec = 1.0 / (np.asarray(variances, dtype=float) + floor)
    w_new = prec / prec.sum()
    w = damping_new * w_new + (1.0 - damping_new) * np.asarray(prev, dtype=float)
    return w / w.sum()


def combine(corrected, weights) -> np.ndarray:
    return kernels.weighted_sum(np.ascontiguousarray(weights, dtype=np.float64), np.ascontiguousarray(corrected))


def validation_score(corrected, theta_hat, weights, val_idx, mode="proxy", theta_true=None) -> float:
    """Score of the current iterate on the validation indices.

    ``oracle`` is the mean squared error against ``theta_true``; ``proxy``
    is the weighted spread of the corrected observations around the
    estimate. Both average over time points and dimensions.
    """
    val_idx = np.asarray(val_idx)
    if val_idx.size == 0:
        raise ValueError("validation index set is empty")
    est = theta_hat[val_idx]
    if mode == "oracle":
        if theta_true is None:
            raise ValueError("oracle validation requires theta_true")
        return float(np.mean((est - theta_true[val_idx]) ** 2))
    if mode == "proxy":
        spread = np.mean((corrected[:, val_idx] - est[None]) ** 2, axis=(1, 2))
        return float(np.dot(weights, spread))
    raise ValueError(f"unknown validation mode {mode!r}")


def run_abloc(data: Dataset, config: ExperimentConfig, theta_true=None) -> AblocState:
    """Run the full loop and return the final state with its best snapshot.

    In ``oracle`` validation mode the dataset's own ``theta`` is used unless
    ``theta_true`` is given.
    """
    params = config.abloc
    if params.max_iter < 1:
        raise ValueError("max_iter must allow at least one iteration")
    Y = np.ascontiguousarray(data.observations)
    X = np.ascontiguousarray(data.covariates)
    K = Y.shape[0]
    if params.validation_mode == "oracle" and theta_true is None:
        theta_true = data.theta
    train_idx, val_idx = split_indices(data.T, config.split_fraction, config.split_mode, config.seed)
    gram = kernels.gram(X, train_idx)

    state = AblocState(theta_hat=Y.mean(axis=0), weights=np.full(K, 1.0 / K))
    for k in range(1, params.max_iter + 1):
        prev = state.theta_hat
        models, bias = learn_bias_step(Y, X, prev, train_idx, k, params, gram=gram)
        corrected = Y - bias
        v = estimate_variances(corrected, prev)
        w = update_weights(v, state.weights, params.damping_new, params.variance_floor)
        theta_hat = combine(corrected, w)
        score = validation_score(corrected, theta_hat, w, val_idx, params.validation_mode, theta_true)
        denom = np.linalg.norm(prev)
        rel = float(np.linalg.norm(theta_hat - prev) / denom) if denom > 0 else float("inf")
        if not np.isfinite(score):
            raise NumericError(f"validation score is not finite at iteration {k}")

        gamma, alpha_k = schedule_values(k, params.alpha0, params)
        state.history.append(IterationRecord(k, gamma, alpha_k, score, rel, w.copy(), v.copy()))
        state.theta_hat, state.weights, state.bias_models, state.iter = theta_hat, w, models, k
        if state.best is None or score < state.best.score:
            state.best = Snapshot(k, theta_hat.copy(), w.copy(), models, score)
        log.debug("iter %d score=%.6g rel=%.3e weights=%s", k, score, rel, np.round(w, 4))
        if rel < params.tol:
            state.converged = True
            break
    return state
