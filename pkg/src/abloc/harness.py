"""Experiment orchestration: single runs, sweeps and report files."""
from __future__ import annotations

import csv
import dataclasses
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema
import numpy as np

from . import kernels
from .baselines import learnable_oracle_combine, oracle_combine, uniform_average
from .config import config_from_dict, config_to_dict
from .engine import run_abloc
from .metrics import achievement_ratio, efficiency, mse, mse_by_component, weight_comparison
from .synth import empirical_agents, empirical_moments, generate_dataset
from .theory import decision_for_agents, efficiency_bound
from .types import ExperimentConfig

REPORT_SCHEMA_VERSION = "1.0"

_NUM = {"type": "number"}
_NUM_LIST = {"type": "array", "items": _NUM}
_THEORY = {
    "type": "object",
    "required": ["v_star", "w_star", "mse_baseline", "mse_optimal", "eta_bound", "oracle_mse_noise_only"],
}
REPORT_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "config", "theory", "results", "weights", "components", "history"],
    "properties": {
        "schema_version": {"type": "string"},
        "backend": {"type": "string"},
        "config": {"type": "object", "required": ["agents", "d", "T", "seed"]},
        "theory": {
            "type": "object",
            "required": ["nominal", "empirical", "empirical_lambda"],
            "properties": {"nominal": _THEORY, "empirical": _THEORY, "empirical_lambda": _NUM_LIST},
        },
        "results": {
            "type": "object",
            "required": [
                "baseline_mse",
                "abloc_mse",
                "oracle_mse",
                "learnable_oracle_mse",
                "efficiency",
                "achievement_ratio_nominal",
                "achievement_ratio_empirical",
                "iterations",
                "early_stop_iteration",
                "converged",
            ],
        },
        "weights": {
            "type": "object",
            "required": ["abloc", "oracle", "relative_error", "correlation"],
            "properties": {"abloc": _NUM_LIST, "oracle": _NUM_LIST, "relative_error": _NUM_LIST},
        },
        "components": {
            "type": "object",
            "required": ["baseline_mse", "abloc_mse", "reduction"],
        },
        "history": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["iteration", "validation_score", "relative_change", "weights"],
            },
        },
    },
}


@dataclass
class RunReport:
    config: dict
    theory: dict
    results: dict
    weights: dict
    components: dict
    history: list
    recommendation: dict = field(default_factory=dict)
    backend: str = ""
    schema_version: str = REPORT_SCHEMA_VERSION

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        jsonschema.validate(data, REPORT_SCHEMA)
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"

    @property
    def experiment_config(self) -> ExperimentConfig:
        return config_from_dict(self.config)


def _floats(a):
    return [float(x) for x in np.asarray(a).ravel()]


def run_experiment(config: ExperimentConfig) -> RunReport:
    """Generate data, run every estimator and collect the numbers."""
    data = generate_dataset(config)
    agents = list(config.agents)
    nominal = efficiency_bound(agents)
    emp_agents = empirical_agents(data, agents)
    empirical = efficiency_bound(emp_agents)

    truth = data.theta
    baseline_est = uniform_average(data.observations)
    state = run_abloc(data, config)
    abloc_est = state.best.theta_hat
    oracle_est, oracle_w = oracle_combine(data, [a.sigma for a in agents])
    _, oracle_w_emp = oracle_combine(data, empirical=True)
    learn_est, _ = learnable_oracle_combine(data, agents)

    base_mse = mse(baseline_est, truth)
    abloc_mse = mse(abloc_est, truth)
    oracle_mse = mse(oracle_est, truth)
    eta = efficiency(base_mse, abloc_mse)
    rel_err, corr = weight_comparison(state.best.weights, oracle_w) if config.K >= 2 else (
        (state.best.weights - oracle_w) / oracle_w,
        1.0,
    )
    comp_base = mse_by_component(baseline_est, truth)
    comp_abloc = mse_by_component(abloc_est, truth)

    results = {
        "baseline_mse": base_mse,
        "abloc_mse": abloc_mse,
        "oracle_mse": oracle_mse,
        "learnable_oracle_mse": mse(learn_est, truth),
        "efficiency": eta,
        "oracle_efficiency": efficiency(base_mse, oracle_mse),
        "achievement_ratio_nominal": achievement_ratio(eta, nominal.eta_bound) if nominal.eta_bound > 0 else None,
        "achievement_ratio_empirical": achievement_ratio(eta, empirical.eta_bound)
        if empirical.eta_bound > 0
        else None,
        "iterations": state.iter,
        "early_stop_iteration": state.best.iteration,
        "best_validation_score": state.best.score,
        "converged": state.converged,
        "validation_mode": config.abloc.validation_mode,
    }
    weights = {
        "abloc": _floats(state.best.weights),
        "oracle": _floats(oracle_w),
        "oracle_empirical": _floats(oracle_w_emp),
        "w_star": _floats(nominal.w_star),
        "relative_error": _floats(rel_err),
        "correlation": float(corr),
    }
    components = {
        "baseline_mse": _floats(comp_base),
        "abloc_mse": _floats(comp_abloc),
        "reduction": _floats((comp_base - comp_abloc) / comp_base),
    }
    history = [
        {
            "iteration": r.iteration,
            "gamma": r.gamma,
            "alpha": r.alpha,
            "validation_score": r.score,
            "relative_change": r.rel_change,
            "weights": _floats(r.weights),
            "variances": _floats(r.variances),
        }
        for r in state.history
    ]
    rec = decision_for_agents(agents, config.T, config.d)
    return RunReport(
        config=config_to_dict(config),
        theory={
            "nominal": nominal.to_dict(),
            "empirical": empirical.to_dict(),
            "empirical_lambda": _floats(empirical_moments(data)["lambda"]),
        },
        results=results,
        weights=weights,
        components=components,
        history=history,
        recommendation={"decision": rec.decision, "checks": rec.checks},
        backend=kernels.BACKEND,
    )


# --- sweeps ---------------------------------------------------------------

SWEEP_AXES = ("seed", "lambda", "T")


def _variant(template: ExperimentConfig, axis: str, value, seed: int) -> ExperimentConfig:
    if axis == "seed":
        return template.replace(seed=int(value))
    if axis == "lambda":
        agents = [dataclasses.replace(a, lam=float(value)) for a in template.agents]
        return template.replace(agents=agents, seed=seed)
    if axis == "T":
        return template.replace(T=int(value), seed=seed)
    raise ValueError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")


def _stats(xs):
    xs = [x for x in xs if x is not None]
    if not xs:
        return {"mean": None, "min": None, "max": None}
    return {"mean": float(np.mean(xs)), "min": float(np.min(xs)), "max": float(np.max(xs))}


def sweep(template: ExperimentConfig, axis: str, values, seeds=None, workers: int = 1) -> dict:
    """Run ``template`` across ``values`` of ``axis``.

    For the ``lambda`` and ``T`` axes every value is run once per seed in
    ``seeds`` (default: the template seed). Results are ordered by value,
    then seed, whatever the worker count.
    """
    values = list(values)
    if len(values) < 2:
        raise ValueError("a sweep needs at least two values")
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")
    seeds = [template.seed] if (axis == "seed" or not seeds) else list(seeds)
    jobs = []
    for value in values:
        for seed in seeds:
            cfg = _variant(template, axis, value, seed)
            jobs.append((value, cfg.seed, cfg))

    configs = [cfg for _, _, cfg in jobs]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(run_experiment, configs))
    else:
        reports = [run_experiment(cfg) for cfg in configs]

    runs = [{"value": v, "seed": s, "report": r.to_dict()} for (v, s, _), r in zip(jobs, reports)]
    aggregate = []
    for value in values:
        rs = [r for (v, _, _), r in zip(jobs, reports) if v == value]
        aggregate.append(
            {
                "value": value,
                "n_runs": len(rs),
                "efficiency": _stats([r.results["efficiency"] for r in rs]),
                "achievement_ratio_nominal": _stats([r.results["achievement_ratio_nominal"] for r in rs]),
                "baseline_mse": _stats([r.results["baseline_mse"] for r in rs]),
                "abloc_mse": _stats([r.results["abloc_mse"] for r in rs]),
                "oracle_mse": _stats([r.results["oracle_mse"] for r in rs]),
                "weight_correlation": _stats([r.weights["correlation"] for r in rs]),
                "eta_bound_nominal": _stats([r.theory["nominal"]["eta_bound"] for r in rs]),
            }
        )
    return {"schema_version": REPORT_SCHEMA_VERSION, "axis": axis, "values": values, "seeds": seeds,
            "aggregate": aggregate, "runs": runs}


# --- output files -----------------------------------------------------------

FORMATS = ("json", "csv", "plotdata")


def _write_csv(path: Path, header, rows):
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    return path


def emit_outputs(report: RunReport, out_dir, formats=("json",)) -> list:
    """Write the requested artefacts under ``out_dir``; returns their paths."""
    formats = list(formats)
    bad = sorted(set(formats) - set(FORMATS))
    if bad:
        raise ValueError(f"unknown output format(s) {bad}; expected a subset of {FORMATS}")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    written = []
    data = report.to_dict()
    if "json" in formats:
        jsonschema.validate(data, REPORT_SCHEMA)
        path = out / "report.json"
        path.write_text(report.to_json())
        written.append(path)
    r, w, c = report.results, report.weights, report.components
    if "csv" in formats:
        written.append(
            _write_csv(
                out / "results.csv",
                ["metric", "value"],
                [
                    ["baseline_mse", r["baseline_mse"]],
                    ["abloc_mse", r["abloc_mse"]],
                    ["oracle_mse", r["oracle_mse"]],
                    ["efficiency", r["efficiency"]],
                    ["theoretical_bound_nominal", report.theory["nominal"]["eta_bound"]],
                    ["theoretical_bound_empirical", report.theory["empirical"]["eta_bound"]],
                    ["achievement_ratio_nominal", r["achievement_ratio_nominal"]],
                    ["achievement_ratio_empirical", r["achievement_ratio_empirical"]],
                    ["iterations", r["iterations"]],
                    ["early_stop_iteration", r["early_stop_iteration"]],
                ],
            )
        )
        written.append(
            _write_csv(
                out / "weights.csv",
                ["agent", "abloc_weight", "oracle_weight", "relative_error"],
                [[i, a, o, e] for i, (a, o, e) in enumerate(zip(w["abloc"], w["oracle"], w["relative_error"]))],
            )
        )
        written.append(
            _write_csv(
                out / "components.csv",
                ["component", "baseline_mse", "abloc_mse", "reduction"],
                [[j, b, a, red] for j, (b, a, red) in enumerate(zip(c["baseline_mse"], c["abloc_mse"], c["reduction"]))],
            )
        )
        K = len(w["abloc"])
        written.append(
            _write_csv(
                out / "history.csv",
                ["iteration", "validation_score", "relative_change"] + [f"w_{i}" for i in range(K)],
                [[h["iteration"], h["validation_score"], h["relative_change"], *h["weights"]] for h in report.history],
            )
        )
    if "plotdata" in formats:
        written.append(
            _write_csv(
                out / "plot_mse_bars.csv",
                ["method", "mse"],
                [["baseline", r["baseline_mse"]], ["abloc", r["abloc_mse"]], ["oracle", r["oracle_mse"]]],
            )
        )
        written.append(
            _write_csv(
                out / "plot_weights.csv",
                ["agent", "abloc_weight", "oracle_weight"],
                [[i, a, o] for i, (a, o) in enumerate(zip(w["abloc"], w["oracle"]))],
            )
        )
        agents = report.config["agents"]
        written.append(
            _write_csv(
                out / "plot_lambda_weight.csv",
                ["agent", "lambda", "weight", "beta", "sigma"],
                [[i, a["lambda"], wt, a["beta"], a["sigma"]] for i, (a, wt) in enumerate(zip(agents, w["abloc"]))],
            )
        )
    return written


def load_report(path) -> RunReport:
    return RunReport.from_dict(json.loads(Path(path).read_text()))


def write_sweep(result: dict, out_dir) -> list:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "sweep.json"
    path.write_text(json.dumps(result, indent=2, sort_keys=True, allow_nan=False) + "\n")
    rows = []
    for agg in result["aggregate"]:
        rows.append(
            [
                agg["value"],
                agg["n_runs"],
                agg["efficiency"]["mean"],
                agg["efficiency"]["min"],
                agg["efficiency"]["max"],
                agg["achievement_ratio_nominal"]["mean"],
                agg["achievement_ratio_nominal"]["min"],
                agg["achievement_ratio_nominal"]["max"],
            ]
        )
    csv_path = _write_csv(
        out / "sweep.csv",
        ["value", "n_runs", "efficiency_mean", "efficiency_min", "efficiency_max",
         "achievement_mean", "achievement_min", "achievement_max"],
        rows,
    )
    return [path, csv_path]
