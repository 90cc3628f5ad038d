"""Seeded synthetic benchmark: trajectory, covariates, biases, observations.

Random streams come from numpy's PCG64 generator. Each (agent, purpose)
pair owns an independent child stream derived as
``SeedSequence(master_seed, spawn_key=(agent, purpose_code))`` so that
changing one agent's draws never shifts another's. Within a stream the
draw order is fixed:

* ``coef``: ``d x 6`` standard normals, dimension-major
* ``covariate_noise``: ``T`` standard normals
* ``stochastic_bias``: ``T x d`` standard normals, time-major
* ``noise``: ``T x d`` standard normals, time-major
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .types import N_LEARNABLE_COVARIATES, DEFAULT_P, AgentSpec, Dataset, ExperimentConfig

PURPOSES = {"coef": 0, "covariate_noise": 1, "stochastic_bias": 2, "noise": 3}
COVARIATE_NOISE_VAR = 0.01
DATASET_FORMAT_VERSION = "1"


@dataclass(frozen=True)
class RngPlan:
    master_seed: int

    def seed_sequence(self, agent: int, purpose: str) -> np.random.SeedSequence:
        if purpose not in PURPOSES:
            raise KeyError(f"unknown RNG purpose {purpose!r}")
        return np.random.SeedSequence(self.master_seed, spawn_key=(int(agent), PURPOSES[purpose]))

    def generator(self, agent: int, purpose: str) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed_sequence(agent, purpose)))


def _time_fraction(T):
    return np.arange(1, T + 1, dtype=np.float64) / T


def generate_trajectory(T: int, d: int = 3) -> np.ndarray:
    """True parameter path for ``t = 1..T``.

    The first three components follow the benchmark formulas; any further
    components are zero and ``d < 3`` truncates.
    """
    if T < 1 or d < 1:
        raise ValueError(f"T and d must be >= 1, got T={T}, d={d}")
    s = _time_fraction(T)
    full = np.stack(
        [
            np.sin(4 * np.pi * s),
            0.5 * np.cos(8 * np.pi * s),
            0.3 * np.sin(4 * np.pi * s) + 0.1 * s,
        ],
        axis=1,
    )
    out = np.zeros((T, d))
    m = min(d, 3)
    out[:, :m] = full[:, :m]
    return out


def generate_covariates(T: int, p: int, agent_index: int, rng: RngPlan) -> np.ndarray:
    if p != DEFAULT_P:
        raise ValueError(f"only the {DEFAULT_P}-column covariate layout is supported, got p={p}")
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    s = _time_fraction(T)
    xi = rng.generator(agent_index, "covariate_noise").standard_normal(T) * np.sqrt(COVARIATE_NOISE_VAR)
    phase = 4 * np.pi * s + 0.1 * agent_index
    return np.stack(
        [
            np.sin(phase),
            np.cos(phase),
            np.sin(8 * np.pi * s),
            np.cos(8 * np.pi * s),
            s,
            s**2,
            np.sin(12 * np.pi * s),
            np.cos(12 * np.pi * s),
            xi,
            np.ones(T),
        ],
        axis=1,
    )


def generate_bias(agent: AgentSpec, covariates: np.ndarray, d: int, rng: RngPlan, agent_index: int):
    """Draw coefficients and both bias components for one agent.

    Returns ``(coefficients (d, 6), learnable (T, d), stochastic (T, d))``.
    """
    covariates = np.asarray(covariates, dtype=np.float64)
    if covariates.ndim != 2 or covariates.shape[1] < N_LEARNABLE_COVARIATES:
        raise ValueError(f"covariates must be (T, >=6), got {covariates.shape}")
    T = covariates.shape[0]
    scale = np.sqrt(agent.learnable_sq / N_LEARNABLE_COVARIATES)
    coef = rng.generator(agent_index, "coef").standard_normal((d, N_LEARNABLE_COVARIATES)) * scale
    learnable = covariates[:, :N_LEARNABLE_COVARIATES] @ coef.T
    stochastic = rng.generator(agent_index, "stochastic_bias").standard_normal((T, d)) * np.sqrt(agent.tau_sq)
    return coef, learnable, stochastic


def generate_dataset(config: ExperimentConfig) -> Dataset:
    T, d, K = config.T, config.d, config.K
    rng = RngPlan(config.seed)
    theta = generate_trajectory(T, d)
    X = np.empty((K, T, DEFAULT_P))
    f = np.empty((K, T, d))
    nu = np.empty((K, T, d))
    eps = np.empty((K, T, d))
    coefs = np.empty((K, d, N_LEARNABLE_COVARIATES))
    for i, agent in enumerate(config.agents):
        X[i] = generate_covariates(T, agent.p, i, rng)
        coefs[i], f[i], nu[i] = generate_bias(agent, X[i], d, rng, i)
        eps[i] = rng.generator(i, "noise").standard_normal((T, d)) * agent.sigma
    Y = theta[None] + f + nu + eps
    return Dataset(
        theta=theta,
        covariates=X,
        learnable_bias=f,
        stochastic_bias=nu,
        noise=eps,
        observations=Y,
        coefficients=coefs,
    )


def empirical_moments(data: Dataset) -> dict:
    """Realised per-agent variances of each error component.

    Variances are per parameter dimension (averaged over dimensions) and
    centred over time.
    """
    var_f = data.learnable_bias.var(axis=1).mean(axis=1)
    var_nu = data.stochastic_bias.var(axis=1).mean(axis=1)
    var_eps = data.noise.var(axis=1).mean(axis=1)
    total = var_f + var_nu
    lam = np.divide(var_f, total, out=np.zeros_like(total), where=total > 0)
    return {"lambda": lam, "beta_sq": total, "sigma_sq": var_eps, "var_f": var_f, "var_nu": var_nu}


def empirical_agents(data: Dataset, nominal) -> list:
    """AgentSpecs built from realised moments, for the empirical bound."""
    m = empirical_moments(data)
    return [
        AgentSpec(
            lam=float(np.clip(m["lambda"][i], 0.0, 1.0)),
            beta=float(np.sqrt(m["beta_sq"][i])),
            sigma=float(np.sqrt(m["sigma_sq"][i])),
            p=nominal[i].p,
        )
        for i in range(data.K)
    ]


# --- CSV directory export -------------------------------------------------

_PER_AGENT = ("covariates", "learnable_bias", "stochastic_bias", "noise", "observations")


def _write_matrix(path: Path, header, rows):
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) for v in row])


def _read_matrix(path: Path) -> np.ndarray:
    with path.open(newline="") as fh:
        r = csv.reader(fh)
        next(r)
        return np.array([[float(v) for v in row] for row in r], dtype=np.float64)


def save_dataset(data: Dataset, out_dir, config: ExperimentConfig | None = None) -> list:
    """Write one CSV per array plus ``manifest.json``; returns written paths."""
    from .config import config_to_dict

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    dims = [f"theta_{j}" for j in range(data.d)]
    path = out / "theta.csv"
    _write_matrix(path, ["t"] + dims, np.column_stack([np.arange(1, data.T + 1), data.theta]))
    written.append(path)
    for name in _PER_AGENT:
        arr = getattr(data, name)
        width = arr.shape[2]
        prefix = "x" if name == "covariates" else "dim"
        for i in range(data.K):
            path = out / f"{name}_agent{i}.csv"
            header = ["t"] + [f"{prefix}_{j}" for j in range(width)]
            _write_matrix(path, header, np.column_stack([np.arange(1, data.T + 1), arr[i]]))
            written.append(path)
    for i in range(data.K):
        path = out / f"coefficients_agent{i}.csv"
        header = ["dim"] + [f"a_{c}" for c in range(N_LEARNABLE_COVARIATES)]
        _write_matrix(path, header, np.column_stack([np.arange(data.d), data.coefficients[i]]))
        written.append(path)
    manifest = {
        "format_version": DATASET_FORMAT_VERSION,
        "rng": "numpy PCG64 via SeedSequence(master_seed, spawn_key=(agent, purpose))",
        "purposes": PURPOSES,
        "K": data.K,
        "T": data.T,
        "d": data.d,
        "p": int(data.covariates.shape[2]),
        "config": config_to_dict(config) if config is not None else None,
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    written.append(path)
    return written


def load_dataset(in_dir) -> Dataset:
    src = Path(in_dir)
    manifest = json.loads((src / "manifest.json").read_text())
    K = manifest["K"]
    theta = _read_matrix(src / "theta.csv")[:, 1:]
    arrays = {}
    for name in _PER_AGENT:
        arrays[name] = np.stack([_read_matrix(src / f"{name}_agent{i}.csv")[:, 1:] for i in range(K)])
    coefs = np.stack([_read_matrix(src / f"coefficients_agent{i}.csv")[:, 1:] for i in range(K)])
    return Dataset(theta=theta, coefficients=coefs, **arrays)
