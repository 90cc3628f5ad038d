"""YAML experiment configuration: parsing, validation and serialisation.

A config file is a flat mapping whose keys mirror ``ExperimentConfig``::

    schema_version: 1
    d: 3
    T: 2000
    seed: 42
    agents:
      - {lambda: 0.75, beta: 0.40, sigma: 0.10}
    abloc:
      validation_mode: oracle

Anything omitted takes its default; unknown keys are rejected.
"""
from __future__ import annotations

import dataclasses
from pathlib import Path

import yaml

from .errors import ConfigError
from .types import AblocParams, AgentSpec, ExperimentConfig

SCHEMA_VERSION = 1
TOP_KEYS = {"schema_version", "d", "T", "K", "seed", "split_fraction", "split_mode", "agents", "abloc"}
AGENT_KEYS = {"lambda", "beta", "sigma", "p"}
ABLOC_KEYS = {f.name for f in dataclasses.fields(AblocParams)}


def _key_lines(text):
    """Map dotted key paths to 1-based source lines, best effort."""
    try:
        root = yaml.compose(text)
    except yaml.YAMLError:
        return {}
    lines = {}

    def walk(node, prefix):
        if isinstance(node, yaml.MappingNode):
            for k, v in node.value:
                path = f"{prefix}.{k.value}" if prefix else str(k.value)
                lines[path] = k.start_mark.line + 1
                walk(v, path)
        elif isinstance(node, yaml.SequenceNode):
            for i, item in enumerate(node.value):
                path = f"{prefix}[{i}]"
                lines[path] = item.start_mark.line + 1
                walk(item, path)

    if root is not None:
        walk(root, "")
    return lines


def _number(value, field, kind=float):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", field=field)
    if kind is int:
        if int(value) != value:
            raise ConfigError(f"expected an integer, got {value!r}", field=field)
        return int(value)
    return float(value)


def _check_keys(mapping, allowed, where):
    if not isinstance(mapping, dict):
        raise ConfigError(f"expected a mapping, got {type(mapping).__name__}", field=where or None)
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        field = f"{where}.{unknown[0]}" if where else str(unknown[0])
        raise ConfigError(f"unknown key(s) {unknown}", field=field)


def config_from_dict(raw: dict) -> ExperimentConfig:
    _check_keys(raw, TOP_KEYS, "")
    version = raw.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema version {version!r}", field="schema_version")
    agents_raw = raw.get("agents")
    if not isinstance(agents_raw, list) or not agents_raw:
        raise ConfigError("must be a non-empty list of agent mappings", field="agents")
    agents = []
    for i, a in enumerate(agents_raw):
        where = f"agents[{i}]"
        _check_keys(a, AGENT_KEYS, where)
        for req in ("lambda", "beta", "sigma"):
            if req not in a:
                raise ConfigError("missing required key", field=f"{where}.{req}")
        try:
            agents.append(
                AgentSpec(
                    lam=_number(a["lambda"], f"{where}.lambda"),
                    beta=_number(a["beta"], f"{where}.beta"),
                    sigma=_number(a["sigma"], f"{where}.sigma"),
                    p=_number(a.get("p", 10), f"{where}.p", int),
                )
            )
        except ConfigError as exc:
            if exc.field.startswith(where):
                raise
            raise ConfigError(exc.reason, field=f"{where}.{exc.field}") from None
    if "K" in raw and _number(raw["K"], "K", int) != len(agents):
        raise ConfigError(f"K={raw['K']} but {len(agents)} agents listed", field="K")

    abloc_raw = raw.get("abloc", {}) or {}
    _check_keys(abloc_raw, ABLOC_KEYS, "abloc")
    abloc_kwargs = {}
    for name, value in abloc_raw.items():
        if name == "validation_mode":
            abloc_kwargs[name] = value
        elif name == "max_iter":
            abloc_kwargs[name] = _number(value, f"abloc.{name}", int)
        else:
            abloc_kwargs[name] = _number(value, f"abloc.{name}")
    try:
        abloc = AblocParams(**abloc_kwargs)
    except ConfigError as exc:
        raise ConfigError(exc.reason, field=f"abloc.{exc.field}") from None
    except TypeError as exc:
        raise ConfigError(str(exc), field="abloc") from None

    kwargs = {"agents": agents, "abloc": abloc}
    for name, kind in (("d", int), ("T", int), ("seed", int), ("split_fraction", float)):
        if name in raw:
            kwargs[name] = _number(raw[name], name, kind)
    if "split_mode" in raw:
        kwargs["split_mode"] = raw["split_mode"]
    return ExperimentConfig(**kwargs)


def parse_config(text: str) -> ExperimentConfig:
    try:
        raw = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        line = mark.line + 1 if mark is not None else None
        raise ConfigError(f"YAML parse error: {exc.problem}", line=line) from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"YAML parse error: {exc}") from None
    if raw is None:
        raise ConfigError("config is empty")
    try:
        return config_from_dict(raw)
    except ConfigError as exc:
        if exc.field is not None and exc.line is None:
            lines = _key_lines(text)
            line = lines.get(exc.field) or lines.get(exc.field.split(".")[0])
            if line is not None:
                raise ConfigError(exc.reason, field=exc.field, line=line) from None
        raise


def load_config(path) -> ExperimentConfig:
    return parse_config(Path(path).read_text())


def config_to_dict(config: ExperimentConfig) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "d": config.d,
        "T": config.T,
        "K": config.K,
        "seed": config.seed,
        "split_fraction": config.split_fraction,
        "split_mode": config.split_mode,
        "agents": [{"lambda": a.lam, "beta": a.beta, "sigma": a.sigma, "p": a.p} for a in config.agents],
        "abloc": dataclasses.asdict(config.abloc),
    }


def dump_config(config: ExperimentConfig) -> str:
    return yaml.safe_dump(config_to_dict(config), sort_keys=False)
