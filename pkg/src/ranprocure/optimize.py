"""Exhaustive search for the supplier margin pair that maximizes portfolio profit."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Sequence

import numpy as np

from .econ import GlobalParams
from .demand import MarketParams
from .game import MarginGrid, ModelParams, RegionInputs, default_portfolio, payoff_grid, region_base
from .scenarios import ALL_SCENARIOS, Scenario


class Aggregation(str, Enum):
    TOTAL = "total"
    MNO_ONLY = "mno_only"
    NIS_PLUS_OEM = "nis_plus_oem"


@dataclass(frozen=True)
class ObjectiveSpec:
    portfolio: tuple  # of (Scenario, RegionInputs)
    grid: MarginGrid = field(default_factory=MarginGrid)
    aggregation: Aggregation = Aggregation.TOTAL

    def __post_init__(self):
        entries = tuple((Scenario.parse(s), r) for s, r in self.portfolio)
        if not entries:
            raise ValueError("portfolio is empty")
        object.__setattr__(self, "portfolio", entries)
        object.__setattr__(self, "aggregation", Aggregation(self.aggregation))

    @classmethod
    def default(cls, regions: Sequence[RegionInputs] | None = None, scenarios=ALL_SCENARIOS, **kw) -> "ObjectiveSpec":
        regions = default_portfolio() if regions is None else regions
        return cls(tuple((s, r) for r in regions for s in scenarios), **kw)


@dataclass(frozen=True)
class Optimum:
    nis_margin_frac: float
    oem_margin_frac: float
    objective_value: float
    evaluations: int

    def as_dict(self) -> dict:
        return {
            "nis_margin_frac": self.nis_margin_frac,
            "oem_margin_frac": self.oem_margin_frac,
            "objective_value": self.objective_value,
            "evaluations": self.evaluations,
        }


def _aggregate(pg, aggregation: Aggregation) -> np.ndarray:
    if aggregation is Aggregation.TOTAL:
        return pg.mno + pg.nis + pg.oem
    if aggregation is Aggregation.MNO_ONLY:
        return pg.mno
    return pg.nis + pg.oem


def entry_surface(scenario: Scenario, region: RegionInputs, grid: MarginGrid, params: ModelParams, aggregation) -> np.ndarray:
    """One portfolio entry's objective over the grid.

    DirectOEM has no NIS tier, so its contribution is constant along the
    NIS axis (evaluated at an NIS margin of 0).
    """
    nis_values, oem_values = grid.nis_values, grid.oem_values
    if scenario.has_nis:
        pg = payoff_grid(scenario, region, nis_values, oem_values, params)
        return _aggregate(pg, Aggregation(aggregation))
    pg = payoff_grid(scenario, region, [0.0], oem_values, params)
    return np.broadcast_to(_aggregate(pg, Aggregation(aggregation)), (len(nis_values), len(oem_values)))


def objective_surface(spec: ObjectiveSpec, params: ModelParams) -> np.ndarray:
    """Summed objective, shape ``(n_nis, n_oem)``, accumulated in portfolio order."""
    acc = np.zeros(spec.grid.shape)
    for scenario, region in spec.portfolio:
        acc = acc + entry_surface(scenario, region, spec.grid, params, spec.aggregation)
    return acc


def margin_grid_search(spec: ObjectiveSpec, params: ModelParams) -> Optimum:
    """Global grid optimum; ties go to the lowest NIS then lowest OEM margin."""
    surface = objective_surface(spec, params)
    flat = int(np.argmax(surface))  # row-major: first max is lowest NIS, then lowest OEM
    i, j = np.unravel_index(flat, surface.shape)
    return Optimum(
        float(spec.grid.nis_values[i]),
        float(spec.grid.oem_values[j]),
        float(surface[i, j]),
        surface.size * len(spec.portfolio),
    )


def per_scenario_search(spec: ObjectiveSpec, params: ModelParams) -> dict:
    """Separate optimum for each scenario present in the portfolio."""
    out = {}
    for s in dict.fromkeys(sc for sc, _ in spec.portfolio):
        sub = replace(spec, portfolio=tuple(e for e in spec.portfolio if e[0] is s))
        out[s] = margin_grid_search(sub, params)
    return out


def contributions(spec: ObjectiveSpec, params: ModelParams, nis: float, oem: float) -> dict:
    """Payoff sums by (scenario, stakeholder) at one margin pair."""
    out = {s: {"mno": 0.0, "nis": 0.0, "oem": 0.0} for s in dict.fromkeys(sc for sc, _ in spec.portfolio)}
    for scenario, region in spec.portfolio:
        pg = payoff_grid(scenario, region, [nis if scenario.has_nis else 0.0], [oem], params)
        c = out[scenario]
        c["mno"] += float(pg.mno[0, 0])
        c["nis"] += float(pg.nis[0, 0])
        c["oem"] += float(pg.oem[0, 0])
    return {s.value: v for s, v in out.items()}


# -- sensitivity ---------------------------------------------------------------------

SWEEP_PARAMETERS = (
    "theta",
    "discount_rate",
    "opex_rate.traditional",
    "opex_rate.predatory",
    "opex_rate.direct_oem",
    "national_arpu",
)


def with_parameter(params: ModelParams, name: str, value: float) -> ModelParams:
    """Copy of ``params`` with one sweepable parameter changed."""
    g = params.globals
    if name == "theta":
        return replace(params, theta=value)
    if name == "discount_rate":
        return replace(params, globals=GlobalParams(g.horizon, value, dict(g.opex_rates)))
    if name.startswith("opex_rate."):
        scenario = Scenario.parse(name.split(".", 1)[1])
        rates = dict(g.opex_rates)
        rates[scenario] = value
        return replace(params, globals=GlobalParams(g.horizon, g.discount_rate, rates))
    if name == "national_arpu":
        market: MarketParams = replace(params.market, national_arpu_usd_month=value)
        return replace(params, market=market)
    raise ValueError(f"unknown sweep parameter {name!r}; expected one of {', '.join(SWEEP_PARAMETERS)}")


@dataclass(frozen=True)
class SweepRow:
    parameter: str
    value: float
    optimum: Optimum
    contributions: dict

    def as_dict(self) -> dict:
        row = {"parameter": self.parameter, "value": self.value, **self.optimum.as_dict()}
        for s, c in self.contributions.items():
            for who, v in c.items():
                row[f"{s}.{who}"] = v
        return row


def sensitivity_sweep(spec: ObjectiveSpec, params: ModelParams, param_name: str, values: Sequence[float]) -> list[SweepRow]:
    """One optimization per value, rows in input order."""
    if param_name not in SWEEP_PARAMETERS:
        raise ValueError(f"unknown sweep parameter {param_name!r}; expected one of {', '.join(SWEEP_PARAMETERS)}")
    rows = []
    for v in values:
        p = with_parameter(params, param_name, v)
        opt = margin_grid_search(spec, p)
        rows.append(SweepRow(param_name, v, opt, contributions(spec, p, opt.nis_margin_frac, opt.oem_margin_frac)))
    return rows


def post_year0_flows_nonnegative(spec: ObjectiveSpec, params: ModelParams) -> bool:
    """True when every year >= 1 net flow in the portfolio is >= 0.

    Only MNO flows can go negative; supplier opex margins are >= 0 for any
    admissible margin pair.
    """
    for scenario, region in spec.portfolio:
        base = region_base(scenario, region, params)
        if any(v < 0 for v in base.cashflows.yearly_net[1:]):
            return False
    return True
