"""Adaptive bias learning and optimal combining for multi-agent estimation."""
from .baselines import learnable_oracle_combine, oracle_combine, uniform_average
from .config import load_config, parse_config
from .engine import run_abloc
from .harness import RunReport, emit_outputs, run_experiment, sweep
from .synth import generate_dataset
from .theory import efficiency_bound
from .types import AblocParams, AgentSpec, Dataset, ExperimentConfig

__version__ = "0.1.0"

BENCHMARK_AGENTS = (
    AgentSpec(0.75, 0.40, 0.10),
    AgentSpec(0.60, 0.45, 0.12),
    AgentSpec(0.50, 0.50, 0.15),
    AgentSpec(0.30, 0.60, 0.20),
)


def benchmark_config(seed: int = 42, validation_mode: str = "oracle", **overrides) -> ExperimentConfig:
    """The four-agent, T=2000, d=3 benchmark configuration."""
    return ExperimentConfig(
        agents=BENCHMARK_AGENTS,
        seed=seed,
        abloc=AblocParams(validation_mode=validation_mode),
        **overrides,
    )


__all__ = [
    "AblocParams",
    "AgentSpec",
    "Dataset",
    "ExperimentConfig",
    "BENCHMARK_AGENTS",
    "RunReport",
    "efficiency_bound",
    "emit_outputs",
    "generate_dataset",
    "learnable_oracle_combine",
    "load_config",
    "oracle_combine",
    "benchmark_config",
    "parse_config",
    "run_abloc",
    "run_experiment",
    "sweep",
    "uniform_average",
]
