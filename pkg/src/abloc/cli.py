"""Command line entry point: ``abloc generate|theory|run|sweep|recommend``."""
from __future__ import annotations

import json
import logging
import sys

import click

from .config import load_config
from .errors import ConfigError, NumericError
from .harness import FORMATS, emit_outputs, run_experiment, sweep, write_sweep
from .synth import generate_dataset, save_dataset
from .theory import decision_for_agents, efficiency_bound, sample_requirement

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def _load(path, seed):
    cfg = load_config(path)
    if seed is not None:
        cfg = cfg.replace(seed=seed)
    return cfg


def _seed_list(spec):
    """Parse ``"0-9"`` or ``"1,5,7"`` into a list of ints."""
    if spec is None:
        return None
    out = []
    for part in spec.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


config_opt = click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False),
                          help="YAML experiment config.")
seed_opt = click.option("--seed", type=int, default=None, help="Override the config seed.")


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log per-iteration progress.")
def main(verbose):
    """Adaptive bias learning and optimal combining experiments."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")


@main.command()
@config_opt
@seed_opt
@click.option("--out", required=True, type=click.Path(file_okay=False), help="Output directory.")
def generate(config_path, seed, out):
    """Write a synthetic dataset as CSV files plus a manifest."""
    cfg = _load(config_path, seed)
    paths = save_dataset(generate_dataset(cfg), out, cfg)
    click.echo(f"wrote {len(paths)} files to {out}")


@main.command()
@config_opt
@click.option("--out", type=click.Path(file_okay=False), default=None)
@click.option("--eps", type=float, default=0.1, show_default=True, help="Target accuracy for the sample bound.")
@click.option("--delta", type=float, default=0.05, show_default=True, help="Failure probability.")
@click.option("--constant", "C", type=float, default=1.0, show_default=True, help="Sample-bound constant C.")
def theory(config_path, out, eps, delta, C):
    """Closed-form bounds for the configured agents (no simulation)."""
    cfg = load_config(config_path)
    report = efficiency_bound(cfg.agents).to_dict()
    lam_bar = sum(a.lam for a in cfg.agents) / cfg.K
    if lam_bar > 0:
        report["sample_requirement"] = sample_requirement(C, cfg.d, [a.p for a in cfg.agents], eps, lam_bar, delta, cfg.K)
    text = json.dumps(report, indent=2, sort_keys=True)
    if out:
        from pathlib import Path

        Path(out).mkdir(parents=True, exist_ok=True)
        (Path(out) / "theory.json").write_text(text + "\n")
    click.echo(text)


@main.command()
@config_opt
@seed_opt
@click.option("--out", type=click.Path(file_okay=False), default=None)
@click.option("--format", "formats", multiple=True, type=click.Choice(FORMATS), default=("json", "csv", "plotdata"),
              show_default=True)
def run(config_path, seed, out, formats):
    """Run one full experiment and report it."""
    cfg = _load(config_path, seed)
    report = run_experiment(cfg)
    r = report.results
    click.echo(
        f"baseline={r['baseline_mse']:.5f} abloc={r['abloc_mse']:.5f} oracle={r['oracle_mse']:.5f} "
        f"efficiency={r['efficiency']:.3f} bound={report.theory['nominal']['eta_bound']:.3f} "
        f"iterations={r['iterations']} best_iter={r['early_stop_iteration']}"
    )
    if out:
        for path in emit_outputs(report, out, formats):
            click.echo(f"wrote {path}")


@main.command(name="sweep")
@config_opt
@click.option("--axis", type=click.Choice(["seed", "lambda", "T"]), required=True)
@click.option("--values", required=True, help="Comma-separated axis values, or a range like 0-9 for seeds.")
@click.option("--seeds", default=None, help="Seeds per value for lambda/T sweeps, e.g. 0-9.")
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), default=None)
def sweep_cmd(config_path, axis, values, seeds, workers, out):
    """Repeat the experiment along one axis and aggregate."""
    cfg = load_config(config_path)
    if axis == "seed":
        vals = _seed_list(values)
    elif axis == "T":
        vals = [int(v) for v in values.split(",")]
    else:
        vals = [float(v) for v in values.split(",")]
    result = sweep(cfg, axis, vals, seeds=_seed_list(seeds), workers=workers)
    for agg in result["aggregate"]:
        e, a = agg["efficiency"], agg["achievement_ratio_nominal"]
        ach = f"{a['mean']:.3f}" if a["mean"] is not None else "n/a"
        click.echo(f"{axis}={agg['value']}: efficiency mean={e['mean']:.3f} [{e['min']:.3f}, {e['max']:.3f}] "
                   f"achievement={ach} runs={agg['n_runs']}")
    if out:
        for path in write_sweep(result, out):
            click.echo(f"wrote {path}")


@main.command()
@config_opt
def recommend(config_path):
    """Say whether bias learning is worthwhile for the configured system."""
    cfg = load_config(config_path)
    rec = decision_for_agents(cfg.agents, cfg.T, cfg.d)
    click.echo(f"recommendation: {rec.decision}")
    for name, check in rec.checks.items():
        status = "pass" if check["passed"] else "FAIL"
        click.echo(f"  {name}: {status} (value={check['value']:.4g}, threshold={check['threshold']:.4g})")


def run_cli(argv=None) -> int:
    """Invoke the CLI and map failures onto exit codes."""
    try:
        main.main(args=argv, standalone_mode=False)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        return EXIT_CONFIG
    except NumericError as exc:
        click.echo(f"numeric error: {exc}", err=True)
        return EXIT_NUMERIC
    except OSError as exc:
        click.echo(f"I/O error: {exc}", err=True)
        return EXIT_IO
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Abort:
        return 1
    return EXIT_OK


def entry():
    sys.exit(run_cli())


if __name__ == "__main__":
    entry()
