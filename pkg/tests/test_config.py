import textwrap

import pytest

from abloc.config import config_to_dict, dump_config, load_config, parse_config
from abloc.errors import ConfigError

MINIMAL = """
agents:
  - {lambda: 0.75, beta: 0.40, sigma: 0.10}
  - {lambda: 0.30, beta: 0.60, sigma: 0.20}
"""


def test_minimal_config_gets_defaults():
    cfg = parse_config(MINIMAL)
    assert cfg.K == 2 and cfg.d == 3 and cfg.T == 2000 and cfg.seed == 42
    assert cfg.split_fraction == 0.8 and cfg.split_mode == "contiguous"
    a = cfg.abloc
    assert (a.alpha0, a.max_iter, a.tol, a.damping_new) == (0.1, 30, 1e-4, 0.7)
    assert (a.shrink_base, a.shrink_step, a.shrink_cap) == (0.5, 0.02, 0.9)
    assert cfg.agents[0].p == 10


def test_out_of_range_lambda_names_field():
    text = MINIMAL.replace("lambda: 0.30", "lambda: 1.5")
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert "lambda" in str(exc.value)
    assert exc.value.field == "agents[1].lambda"
    assert exc.value.line == 4


@pytest.mark.parametrize("frac", [0, 1, -0.2])
def test_bad_split_fraction(frac):
    with pytest.raises(ConfigError) as exc:
        parse_config(MINIMAL + f"split_fraction: {frac}\n")
    assert exc.value.field == "split_fraction"


@pytest.mark.parametrize(
    "extra,field",
    [
        ("colour: blue\n", "colour"),
        ("abloc: {alpha: 0.1}\n", "abloc.alpha"),
        ("abloc: {max_iter: 0}\n", "abloc.max_iter"),
        ("abloc: {validation_mode: magic}\n", "abloc.validation_mode"),
        ("K: 3\n", "K"),
        ("T: 5\n", "T"),
    ],
)
def test_validation_errors_name_the_field(extra, field):
    with pytest.raises(ConfigError) as exc:
        parse_config(MINIMAL + extra)
    assert exc.value.field == field


def test_unknown_agent_key_rejected():
    with pytest.raises(ConfigError) as exc:
        parse_config("agents:\n  - {lambda: 0.5, beta: 0.1, sigma: 0.1, gain: 2}\n")
    assert exc.value.field == "agents[0].gain"


def test_parse_error_reports_line():
    bad = textwrap.dedent(
        """\
        d: 3
        T: 2000
        agents: [ {lambda: 0.5
        """
    )
    with pytest.raises(ConfigError) as exc:
        parse_config(bad)
    assert exc.value.line is not None and exc.value.line >= 3


def test_empty_config_rejected():
    with pytest.raises(ConfigError):
        parse_config("")


def test_round_trip_through_yaml(tmp_path):
    cfg = parse_config(MINIMAL + "seed: 7\nabloc: {validation_mode: oracle}\n")
    path = tmp_path / "c.yaml"
    path.write_text(dump_config(cfg))
    assert load_config(path) == cfg
    assert config_to_dict(cfg)["K"] == 2


def test_shipped_example_config(bench_cfg):
    from pathlib import Path

    shipped = load_config(Path(__file__).parents[1] / "configs" / "benchmark.yaml")
    assert shipped == bench_cfg
