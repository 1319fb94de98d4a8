from pathlib import Path

import pytest

from ranprocure.config import ConfigError, load_config, parse_override
from ranprocure.game import ModelParams, default_portfolio
from ranprocure.optimize import Aggregation
from ranprocure.scenarios import ALL_SCENARIOS, Scenario

ROOT = Path(__file__).resolve().parents[1]


def test_defaults_match_model_defaults():
    cfg = load_config()
    assert cfg.params == ModelParams()
    assert cfg.scenarios == ALL_SCENARIOS
    assert list(cfg.portfolio) == default_portfolio()
    assert cfg.aggregation is Aggregation.TOTAL
    assert cfg.grid.shape == (61, 41)


def test_shipped_config_equals_defaults():
    shipped = load_config(ROOT / "configs" / "default.toml")
    cfg = load_config()
    assert shipped.params == cfg.params
    assert shipped.grid == cfg.grid
    assert shipped.sweeps == cfg.sweeps


def test_overrides_win(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text('[game]\ntheta = 0.2\n[global]\ndiscount_rate = 0.08\n')
    cfg = load_config(p, ["game.theta=0.3", 'scenarios=["s1"]'])
    assert cfg.params.theta == 0.3
    assert cfg.params.globals.discount_rate == 0.08
    assert cfg.scenarios == (Scenario.TRADITIONAL,)


def test_counties_portfolio(tmp_path, data_dir):
    p = tmp_path / "c.toml"
    p.write_text(f'[portfolio]\nsource = "counties"\ndata = "{data_dir / "counties_10.csv"}"\n')
    cfg = load_config(p)
    assert len(cfg.portfolio) == 10
    assert cfg.params.national_household_income == 72_000


@pytest.mark.parametrize(
    "overrides",
    [
        ["nope=1"],
        ["game.nope=1"],
        ["game.theta=2"],
        ["grid.nis_step=0"],
        ["portfolio.source=\"moon\""],
        ["sweep.bogus=[1]"],
        ["catalog.variant=\"missing\""],
        ["no_equals_sign"],
    ],
)
def test_bad_config_raises(overrides):
    with pytest.raises(ConfigError):
        load_config(None, overrides)


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.toml")
    bad = tmp_path / "bad.toml"
    bad.write_text("[game\n")
    with pytest.raises(ConfigError):
        load_config(bad)


def test_parse_override_values():
    assert parse_override("a.b=1.5") == ("a.b", 1.5)
    assert parse_override("a=text") == ("a", "text")
    assert parse_override('a=[1, 2]') == ("a", [1, 2])


def test_audit_contains_parameters():
    audit = load_config().audit()
    assert ModelParams.from_dict(audit["parameters"]) == ModelParams()
    assert audit["seed"] == 2074
