"""Run configuration: a TOML file layered over documented defaults.

Every default below is a model input from the parameter tables; CLI
``--set section.key=value`` overrides win over the file.
"""

from __future__ import annotations

import copy
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .capacity import load_catalog
from .demand import MarketParams
from .econ import GlobalParams
from .game import (
    DEFAULT_GROWTH,
    DEFAULT_THETA,
    MarginGrid,
    ModelParams,
    RegionInputs,
    default_portfolio,
    profile_national_income,
)
from .ingest import load_counties
from .optimize import SWEEP_PARAMETERS, Aggregation
from .scenarios import ALL_SCENARIOS, Scenario

DEFAULTS: dict[str, Any] = {
    "seed": 2074,
    "output_dir": "out",
    "scenarios": [s.value for s in ALL_SCENARIOS],
    "global": {
        "horizon": 10,
        "discount_rate": 0.05,
        "opex_rate": {"traditional": 0.12, "predatory": 0.12, "direct_oem": 0.13},
    },
    "market": {
        "national_arpu_usd_month": 40.0,
        "smartphone_rate": 0.89,
        "active_rate": 0.83,
        "market_structure": "oligopoly",
        "market_share": None,
    },
    "income": {"national_household_income": None},
    "catalog": {"path": None, "variant": "baseline", "interference": 0.0},
    "game": {"theta": DEFAULT_THETA},
    "grid": {
        "nis_min": 0.0,
        "nis_max": 0.60,
        "nis_step": 0.01,
        "oem_min": 0.0,
        "oem_max": 0.40,
        "oem_step": 0.01,
    },
    "portfolio": {"source": "profiles", "data": None, "growth": DEFAULT_GROWTH},
    "optimize": {"aggregation": "total", "per_scenario": False},
    "sweep": {"theta": [0.0, 0.01, 0.0833, 0.5, 1.0]},
}


class ConfigError(Exception):
    """Unreadable, malformed, or out-of-bounds configuration (exit code 2)."""


def _merge(base: dict, extra: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in extra.items():
        where = f"{path}{key}"
        if key not in base and path.rstrip(".") not in ("sweep", "global.opex_rate"):
            raise ConfigError(f"unknown config key {where!r}")
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            out[key] = _merge(base[key], value, where + ".")
        else:
            out[key] = copy.deepcopy(value)
    return out


def parse_override(text: str) -> tuple[str, Any]:
    """``section.key=value``; the value is parsed as JSON when possible."""
    key, sep, raw = text.partition("=")
    if not sep or not key.strip():
        raise ConfigError(f"override {text!r} is not of the form key=value")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value


def _nest(key: str, value: Any) -> dict:
    out: dict = {}
    cur = out
    parts = key.split(".")
    for p in parts[:-1]:
        cur = cur.setdefault(p, {})
    cur[parts[-1]] = value
    return out


@dataclass(frozen=True)
class RunConfig:
    raw: dict
    params: ModelParams
    grid: MarginGrid
    scenarios: tuple
    portfolio: tuple
    output_dir: Path
    seed: int
    aggregation: Aggregation
    per_scenario: bool
    sweeps: dict
    source_path: Path | None = None

    def audit(self) -> dict:
        """Everything needed to reproduce a run, with the catalog expanded inline."""
        return {
            "config": self.raw,
            "parameters": self.params.to_dict(),
            "grid": {k: getattr(self.grid, k) for k in ("nis_min", "nis_max", "nis_step", "oem_min", "oem_max", "oem_step")},
            "scenarios": [s.value for s in self.scenarios],
            "seed": self.seed,
        }


def build_config(data: dict, source_path: Path | None = None) -> RunConfig:
    base_dir = source_path.parent if source_path is not None else Path.cwd()

    def resolve(p):
        if p is None:
            return None
        p = Path(p)
        return p if p.is_absolute() else base_dir / p

    try:
        g = data["global"]
        globals_ = GlobalParams(int(g["horizon"]), float(g["discount_rate"]), dict(g["opex_rate"]))
        market = MarketParams(**data["market"])

        cat = data["catalog"]
        cat_path = resolve(cat["path"])
        if cat_path is not None and not cat_path.exists():
            raise ConfigError(f"catalog file not found: {cat_path}")
        catalog = load_catalog(cat_path, cat.get("variant", "baseline"))

        port = data["portfolio"]
        source = port["source"]
        nhi = data["income"]["national_household_income"]
        if source == "profiles":
            regions = tuple(default_portfolio(float(port["growth"])))
            if nhi is None:
                nhi = profile_national_income()
        elif source == "counties":
            data_path = resolve(port["data"])
            if data_path is None or not data_path.exists():
                raise ConfigError(f"portfolio data file not found: {data_path}")
            ds = load_counties(data_path, nhi)
            regions = tuple(RegionInputs.from_county(c) for c in ds)
            nhi = ds.national_household_income
        else:
            raise ConfigError(f"portfolio.source must be 'profiles' or 'counties', got {source!r}")

        params = ModelParams(globals_, market, float(nhi), catalog, float(data["game"]["theta"]))
        params = params.with_interference(float(cat["interference"]))
        grid = MarginGrid(**{k: float(v) for k, v in data["grid"].items()})
        scenarios = tuple(Scenario.parse(s) for s in data["scenarios"])
        sweeps = {}
        for name, values in data["sweep"].items():
            if name not in SWEEP_PARAMETERS:
                raise ConfigError(f"unknown sweep parameter {name!r}")
            sweeps[name] = [float(v) for v in values]
        return RunConfig(
            raw=data,
            params=params,
            grid=grid,
            scenarios=scenarios,
            portfolio=regions,
            output_dir=resolve(data["output_dir"]),
            seed=int(data["seed"]),
            aggregation=Aggregation(data["optimize"]["aggregation"]),
            per_scenario=bool(data["optimize"]["per_scenario"]),
            sweeps=sweeps,
            source_path=source_path,
        )
    except (ConfigError, FileNotFoundError):
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc


def load_config(path=None, overrides: list[str] | tuple = ()) -> RunConfig:
    data = copy.deepcopy(DEFAULTS)
    source = None
    if path is not None:
        source = Path(path)
        try:
            with source.open("rb") as fh:
                file_data = tomllib.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {source}") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{source}: {exc}") from None
        data = _merge(data, file_data)
    for text in overrides:
        key, value = parse_override(text)
        data = _merge(data, _nest(key, value))
    return build_config(data, source)
