"""Domain types: agent parameters, configs, datasets and algorithm state.

All arrays are float64 and time-major. Per-agent arrays are stacked along
the first axis, so observations have shape ``(K, T, d)`` and covariates
``(K, T, p)``.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigError

DEFAULT_P = 10
N_LEARNABLE_COVARIATES = 6


@dataclass(frozen=True)
class AgentSpec:
    """Nominal parameters of one agent.

    ``beta`` is the total bias standard deviation per parameter dimension and
    ``lam`` the fraction of bias variance explained by covariates.
    """

    lam: float
    beta: float
    sigma: float
    p: int = DEFAULT_P

    def __post_init__(self):
        if not (0.0 <= self.lam <= 1.0) or not np.isfinite(self.lam):
            raise ConfigError(f"must lie in [0, 1], got {self.lam}", field="lambda")
        if not (self.beta >= 0.0) or not np.isfinite(self.beta):
            raise ConfigError(f"must be >= 0, got {self.beta}", field="beta")
        if not (self.sigma > 0.0) or not np.isfinite(self.sigma):
            raise ConfigError(f"must be > 0, got {self.sigma}", field="sigma")
        if int(self.p) != self.p or self.p < 1:
            raise ConfigError(f"must be a positive integer, got {self.p}", field="p")

    @property
    def tau_sq(self) -> float:
        """Variance of the stochastic (unlearnable) bias component."""
        return (1.0 - self.lam) * self.beta**2

    @property
    def learnable_sq(self) -> float:
        return self.lam * self.beta**2


@dataclass(frozen=True)
class AblocParams:
    alpha0: float = 0.1
    max_iter: int = 30
    tol: float = 1e-4
    damping_new: float = 0.7
    shrink_base: float = 0.5
    shrink_step: float = 0.02
    shrink_cap: float = 0.9
    validation_mode: str = "proxy"
    variance_floor: float = 1e-10

    def __post_init__(self):
        for name in ("alpha0", "tol", "shrink_base", "shrink_step", "shrink_cap", "variance_floor"):
            value = getattr(self, name)
            if not (value > 0) or not np.isfinite(value):
                raise ConfigError(f"must be positive, got {value}", field=name)
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ConfigError(f"must be an integer >= 1, got {self.max_iter}", field="max_iter")
        if not (0.0 < self.damping_new <= 1.0):
            raise ConfigError(f"must lie in (0, 1], got {self.damping_new}", field="damping_new")
        if not (self.shrink_base <= self.shrink_cap <= 1.0):
            raise ConfigError("need shrink_base <= shrink_cap <= 1", field="shrink_cap")
        if self.validation_mode not in ("proxy", "oracle"):
            raise ConfigError(
                f"must be 'proxy' or 'oracle', got {self.validation_mode!r}",
                field="validation_mode",
            )


@dataclass(frozen=True)
class ExperimentConfig:
    agents: tuple
    d: int = 3
    T: int = 2000
    seed: int = 42
    split_fraction: float = 0.8
    split_mode: str = "contiguous"
    abloc: AblocParams = field(default_factory=AblocParams)

    def __post_init__(self):
        object.__setattr__(self, "agents", tuple(self.agents))
        if len(self.agents) < 1:
            raise ConfigError("at least one agent is required", field="agents")
        if int(self.d) != self.d or self.d < 1:
            raise ConfigError(f"must be an integer >= 1, got {self.d}", field="d")
        if int(self.T) != self.T or self.T < 10:
            raise ConfigError(f"must be an integer >= 10, got {self.T}", field="T")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ConfigError(f"must be a nonnegative integer, got {self.seed}", field="seed")
        if not (0.0 < self.split_fraction < 1.0):
            raise ConfigError(
                f"must lie strictly between 0 and 1, got {self.split_fraction}",
                field="split_fraction",
            )
        if self.split_mode not in ("contiguous", "random"):
            raise ConfigError(
                f"must be 'contiguous' or 'random', got {self.split_mode!r}", field="split_mode"
            )

    @property
    def K(self) -> int:
        return len(self.agents)

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Generated ground truth and observations.

    ``observations == theta + learnable_bias + stochastic_bias + noise``
    holds elementwise.
    """

    theta: np.ndarray  # (T, d)
    covariates: np.ndarray  # (K, T, p)
    learnable_bias: np.ndarray  # (K, T, d)
    stochastic_bias: np.ndarray  # (K, T, d)
    noise: np.ndarray  # (K, T, d)
    observations: np.ndarray  # (K, T, d)
    coefficients: np.ndarray  # (K, d, 6)

    @property
    def K(self) -> int:
        return self.observations.shape[0]

    @property
    def T(self) -> int:
        return self.observations.shape[1]

    @property
    def d(self) -> int:
        return self.observations.shape[2]

    @property
    def total_bias(self) -> np.ndarray:
        return self.learnable_bias + self.stochastic_bias

    def reconstruction_error(self) -> float:
        rebuilt = self.theta[None] + self.learnable_bias + self.stochastic_bias + self.noise
        return float(np.max(np.abs(self.observations - rebuilt)))


@dataclass
class BiasModel:
    """Ridge coefficients for one agent, one row per parameter dimension."""

    coef: np.ndarray  # (d, p)
    alpha_used: float

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Unshrunk bias prediction of shape ``(len(X), d)``."""
        return X @ self.coef.T


@dataclass
class Snapshot:
    iteration: int
    theta_hat: np.ndarray
    weights: np.ndarray
    bias_models: list
    score: float


@dataclass
class IterationRecord:
    iteration: int
    gamma: float
    alpha: float
    score: float
    rel_change: float
    weights: np.ndarray
    variances: np.ndarray


@dataclass
class AblocState:
    theta_hat: np.ndarray
    weights: np.ndarray
    bias_models: list = field(default_factory=list)
    iter: int = 0
    best: Optional[Snapshot] = None
    converged: bool = False
    history: list = field(default_factory=list)


@dataclass
class TheoryReport:
    v_star: np.ndarray
    w_star: np.ndarray
    mse_baseline: float
    mse_optimal: float
    eta_bound: float
    eta_ratio_form: float
    eta_simplified: float
    oracle_mse_noise_only: float

    def to_dict(self) -> dict:
        out = {}
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            out[f.name] = value.tolist() if isinstance(value, np.ndarray) else float(value)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "TheoryReport":
        kwargs = {}
        for f in dataclasses.fields(cls):
            value = data[f.name]
            kwargs[f.name] = np.asarray(value, dtype=float) if isinstance(value, list) else float(value)
        return cls(**kwargs)


def check_weights(w, atol: float = 1e-12) -> np.ndarray:
    """Return ``w`` as an array after checking it lies on the probability simplex."""
    w = np.asarray(w, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("weights must be a non-empty 1-D vector")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError(f"weights must be finite and nonnegative: {w}")
    if abs(w.sum() - 1.0) > atol:
        raise ValueError(f"weights must sum to 1, got {w.sum()!r}")
    return w
