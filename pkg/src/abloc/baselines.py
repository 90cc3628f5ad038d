"""Reference combiners: the uncorrected uniform average and two oracles."""
import numpy as np

from .theory import optimal_weights
from .types import Dataset


def uniform_average(observations) -> np.ndarray:
    obs = np.asarray(observations, dtype=float)
    if obs.ndim != 3 or obs.shape[0] < 1:
        raise ValueError(f"expected (K, T, d) observations, got shape {obs.shape}")
    return obs.mean(axis=0)


def oracle_combine(data: Dataset, sigmas=None, empirical: bool = False):
    """Remove the full realised bias and fuse by inverse noise variance.

    Weights are proportional to ``1 / sigma_i**2`` using the nominal
    ``sigmas`` unless ``empirical`` is set, in which case the realised
    residual variance of each agent is used instead.
    """
    residual = data.observations - data.total_bias
    if empirical or sigmas is None:
        var = np.mean((residual - data.theta[None]) ** 2, axis=(1, 2))
    else:
        var = np.asarray(sigmas, dtype=float) ** 2
    w = optimal_weights(var)
    return np.tensordot(w, residual, axes=1), w


def learnable_oracle_combine(data: Dataset, agents, empirical: bool = False):
    """Remove only the learnable bias and fuse with the ideal residual weights."""
    residual = data.observations - data.learnable_bias
    if empirical:
        var = np.mean((residual - data.theta[None]) ** 2, axis=(1, 2))
    else:
        var = np.array([a.tau_sq + a.sigma**2 for a in agents])
    w = optimal_weights(var)
    return np.tensordot(w, residual, axes=1), w
