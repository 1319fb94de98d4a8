"""Scenario evaluation and the supplier margin games.

Under Traditional and Predatory procurement the NIS leads by committing to
a margin and the OEM follows with a best response.  Under DirectOEM the
NIS tier disappears and the MNO and OEM maximize their joint profit.

The MNO is passive within a scenario: it pays the catalog price (capped
under Predatory, see :func:`predatory_cap`) and deploys the sites its
demand and coverage require.  Because site counts do not depend on how
the price is split, every payoff is linear in the margin fractions and the
solvers evaluate whole grids with array arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from typing import Sequence

import numpy as np

from .capacity import SiteCatalog, deployed_sites, load_catalog, plan_sites
from .demand import MarketParams, demand_profile
from .econ import (
    CashFlowSeries,
    GlobalParams,
    PayoffTriple,
    UnitEconomics,
    decompose_price,
    mno_cashflows,
    nis_profit_npv,
    npv,
    oem_profit,
    price_chain,
)
from .regions import LABELS, REGION_PROFILES, region_class, region_type
from .scenarios import ALL_SCENARIOS, Scenario

DEFAULT_THETA = 0.0833  # (0.13 - 0.12) / 0.12, opex-rate change as switching proxy
DEFAULT_GROWTH = 0.005
PREDATORY_CAP = "PredatoryCap"
GRID_BOUNDARY = "GridBoundary"


@dataclass(frozen=True)
class RegionInputs:
    """Demographic inputs for one simulated region (a county or a profile)."""

    name: str
    label: str
    population: float
    pop_growth_rate: float
    land_area_sqkm: float
    median_household_income: float
    data_demand_gb_per_user_month: float

    def __post_init__(self):
        object.__setattr__(self, "label", region_type(self.label).label)
        if self.population < 0 or self.land_area_sqkm < 0 or self.data_demand_gb_per_user_month < 0:
            raise ValueError(f"{self.name}: population, area and data demand must be >= 0")
        if not self.median_household_income > 0:
            raise ValueError(f"{self.name}: median_household_income must be > 0")
        if self.pop_growth_rate <= -1:
            raise ValueError(f"{self.name}: pop_growth_rate must be > -1")

    @property
    def region_class(self) -> str:
        return region_class(self.label)

    @classmethod
    def from_county(cls, county, label: str | None = None) -> "RegionInputs":
        from .regions import classify_by_centroid

        if label is None:
            label = classify_by_centroid(county).label
        return cls(
            name=county.fips_id,
            label=label,
            population=county.population,
            pop_growth_rate=county.pop_growth_rate,
            land_area_sqkm=county.land_area_sqkm,
            median_household_income=county.median_household_income,
            data_demand_gb_per_user_month=county.data_demand_gb_per_user_month,
        )

    @classmethod
    def from_profile(cls, label: str, growth: float = DEFAULT_GROWTH) -> "RegionInputs":
        """A representative county with the profile's mean population, income, demand and density."""
        rt = region_type(label)
        p = REGION_PROFILES[rt.label]
        return cls(
            name=rt.label,
            label=rt.label,
            population=p.mean_population,
            pop_growth_rate=growth,
            land_area_sqkm=p.mean_population / p.pop_density_mean,
            median_household_income=p.mean_household_income,
            data_demand_gb_per_user_month=p.data_demand_gb_per_user_month,
        )


def default_portfolio(growth: float = DEFAULT_GROWTH) -> list[RegionInputs]:
    return [RegionInputs.from_profile(label, growth) for label in LABELS]


def profile_national_income() -> float:
    """Population-weighted mean household income over all profile counties."""
    num = sum(p.counties * p.mean_population * p.mean_household_income for p in REGION_PROFILES.values())
    den = sum(p.counties * p.mean_population for p in REGION_PROFILES.values())
    return num / den


@dataclass(frozen=True)
class ModelParams:
    globals: GlobalParams = field(default_factory=GlobalParams)
    market: MarketParams = field(default_factory=MarketParams)
    national_household_income: float = field(default_factory=profile_national_income)
    catalog: SiteCatalog = field(default_factory=load_catalog)
    theta: float = DEFAULT_THETA

    def __post_init__(self):
        if not 0 <= self.theta <= 1:
            raise ValueError("theta must lie in [0, 1]")
        if not self.national_household_income > 0:
            raise ValueError("national_household_income must be > 0")

    def with_interference(self, interference: float) -> "ModelParams":
        """Apply one interference factor to every catalog entry (radius-based area wins)."""

        def apply(key, c):
            if c.interference == interference:
                return c
            area = None if c.coverage_radius_km is not None else c.coverage_area_sqkm
            return replace(c, interference=interference, coverage_area_sqkm=area)

        return replace(self, catalog=self.catalog.map(apply))

    def to_dict(self) -> dict:
        market = asdict(self.market)
        market["market_structure"] = self.market.market_structure.value
        return {
            "horizon": self.globals.horizon,
            "discount_rate": self.globals.discount_rate,
            "opex_rates": {s.value: r for s, r in self.globals.opex_rates.items()},
            "market": market,
            "national_household_income": self.national_household_income,
            "theta": self.theta,
            "catalog": self.catalog.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ModelParams":
        return cls(
            globals=GlobalParams(d["horizon"], d["discount_rate"], dict(d["opex_rates"])),
            market=MarketParams(**d["market"]),
            national_household_income=d["national_household_income"],
            catalog=SiteCatalog.from_dict(d["catalog"]),
            theta=d["theta"],
        )


def _axis(lo: float, hi: float, step: float) -> np.ndarray:
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return np.array([round(lo + step * i, 12) for i in range(n)])


@dataclass(frozen=True)
class MarginGrid:
    """Margin fractions searched by each supplier (inclusive ranges)."""

    nis_min: float = 0.0
    nis_max: float = 0.60
    nis_step: float = 0.01
    oem_min: float = 0.0
    oem_max: float = 0.40
    oem_step: float = 0.01

    def __post_init__(self):
        for tier in ("nis", "oem"):
            lo, hi, step = (getattr(self, f"{tier}_{k}") for k in ("min", "max", "step"))
            if not step > 0:
                raise ValueError(f"{tier} step must be > 0")
            if lo > hi:
                raise ValueError(f"{tier} range is empty ({lo} > {hi})")
            if lo < 0 or hi >= 1:
                raise ValueError(f"{tier} margins must lie in [0, 1)")

    @property
    def nis_values(self) -> np.ndarray:
        return _axis(self.nis_min, self.nis_max, self.nis_step)

    @property
    def oem_values(self) -> np.ndarray:
        return _axis(self.oem_min, self.oem_max, self.oem_step)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.nis_values), len(self.oem_values)

    def refined(self) -> "MarginGrid":
        return replace(self, nis_step=self.nis_step / 2, oem_step=self.oem_step / 2)

    @classmethod
    def single(cls, nis: float, oem: float) -> "MarginGrid":
        return cls(nis, nis, 1.0, oem, oem, 1.0)


@dataclass(frozen=True)
class Margins:
    nis: float
    oem: float


@dataclass(frozen=True)
class Equilibrium:
    scenario: Scenario
    nis_margin_frac: float
    oem_margin_frac: float
    payoffs: PayoffTriple
    binding_constraints: frozenset = frozenset()
    nis_price: float = 0.0
    price_cap: float | None = None

    def as_dict(self) -> dict:
        return {
            "scenario": self.scenario.value,
            "nis_margin_frac": self.nis_margin_frac,
            "oem_margin_frac": self.oem_margin_frac,
            **self.payoffs.as_dict(),
            "binding_constraints": sorted(self.binding_constraints),
            "nis_price": self.nis_price,
            "price_cap": self.price_cap,
        }


# -- pricing -----------------------------------------------------------------------


def predatory_cap(direct_price: float, theta: float) -> float:
    """Highest incumbent price per site that still deters a switch to direct OEM procurement."""
    if not 0 <= theta <= 1:
        raise ValueError("theta must lie in [0, 1]")
    return direct_price * (1 - theta)


def scenario_price(scenario, region_cls: str, params: ModelParams) -> tuple[float, float | None]:
    """Per-site price the MNO pays, and the predatory cap when one applies."""
    scenario = Scenario.parse(scenario)
    price = params.catalog[region_cls, scenario].price_per_site
    if scenario is not Scenario.PREDATORY:
        return price, None
    cap = predatory_cap(params.catalog[region_cls, Scenario.DIRECT_OEM].price_per_site, params.theta)
    return min(price, cap), cap


# -- evaluation --------------------------------------------------------------------


@dataclass(frozen=True)
class RegionBase:
    """Margin-independent part of a region/scenario evaluation."""

    scenario: Scenario
    region: RegionInputs
    price: float
    price_cap: float | None
    sites: int
    opex_rate: float
    revenue: tuple[float, ...]
    cashflows: CashFlowSeries
    mno_npv: float
    plans: tuple


def region_base(scenario, region: RegionInputs, params: ModelParams) -> RegionBase:
    scenario = Scenario.parse(scenario)
    g = params.globals
    config = params.catalog[region.region_class, scenario]
    profile = demand_profile(
        region.population,
        region.pop_growth_rate,
        region.median_household_income,
        region.data_demand_gb_per_user_month,
        params.market,
        params.national_household_income,
        g.horizon,
    )
    plans = plan_sites([p.data_demand for p in profile], region.land_area_sqkm, config)
    sites = deployed_sites(plans)
    price, cap = scenario_price(scenario, region.region_class, params)
    opex = g.opex_rate(scenario)
    revenue = tuple(p.revenue for p in profile)
    cf = mno_cashflows(revenue, sites, price, opex, g.horizon)
    return RegionBase(scenario, region, price, cap, sites, opex, revenue, cf, npv(cf, g.discount_rate), tuple(plans))


@dataclass(frozen=True)
class RegionRun:
    base: RegionBase
    margins: Margins
    unit: UnitEconomics
    payoffs: PayoffTriple


def _check_margins(scenario: Scenario, margins: Margins) -> None:
    if not scenario.has_nis and margins.nis != 0:
        raise ValueError("DirectOEM has no NIS tier; NIS margin must be 0")


def simulate_region(scenario, region: RegionInputs, margins: Margins, params: ModelParams) -> RegionRun:
    """Full pipeline for one region: users, revenue, demand, sites, cash flows, NPVs."""
    scenario = Scenario.parse(scenario)
    _check_margins(scenario, margins)
    base = region_base(scenario, region, params)
    unit = decompose_price(base.price, margins.nis, margins.oem, scenario)
    g = params.globals
    nis = nis_profit_npv(base.sites, unit.nis_margin, base.opex_rate, g.discount_rate, g.horizon) if scenario.has_nis else 0.0
    oem = oem_profit(base.sites, unit.oem_margin)
    return RegionRun(base, margins, unit, PayoffTriple(base.mno_npv, float(nis), float(oem)))


def evaluate(scenario, region: RegionInputs, margins: Margins, params: ModelParams) -> PayoffTriple:
    return simulate_region(scenario, region, margins, params).payoffs


@dataclass(frozen=True)
class PayoffGrid:
    """Stakeholder payoffs over a margin grid; arrays indexed ``[nis, oem]``."""

    scenario: Scenario
    nis_values: np.ndarray
    oem_values: np.ndarray
    mno: np.ndarray
    nis: np.ndarray
    oem: np.ndarray
    base: RegionBase


def payoff_grid(scenario, region: RegionInputs, nis_values, oem_values, params: ModelParams, base: RegionBase | None = None) -> PayoffGrid:
    scenario = Scenario.parse(scenario)
    nis_values = np.asarray(nis_values, dtype=float)
    oem_values = np.asarray(oem_values, dtype=float)
    if base is None:
        base = region_base(scenario, region, params)
    g = params.globals
    fs = nis_values[:, None]
    fo = oem_values[None, :]
    shape = (len(nis_values), len(oem_values))
    nis_margin, _, oem_margin, _ = price_chain(base.price, fs, fo, scenario.has_nis)
    if scenario.has_nis:
        nis = nis_profit_npv(base.sites, nis_margin, base.opex_rate, g.discount_rate, g.horizon)
    else:
        nis = np.zeros(1)
    nis = np.broadcast_to(np.asarray(nis, dtype=float), shape)
    oem = np.broadcast_to(np.asarray(oem_profit(base.sites, oem_margin), dtype=float), shape)
    mno = np.full(shape, base.mno_npv)
    return PayoffGrid(scenario, nis_values, oem_values, mno, nis, oem, base)


def _boundary(values: np.ndarray, idx: int) -> bool:
    return len(values) > 1 and idx == len(values) - 1


def best_response_oem(nis_margin: float, scenario, region: RegionInputs, grid: MarginGrid, params: ModelParams) -> float:
    """OEM margin maximizing OEM profit given the NIS margin (ties -> lowest margin)."""
    pg = payoff_grid(scenario, region, [nis_margin], grid.oem_values, params)
    return float(pg.oem_values[int(np.argmax(pg.oem[0]))])


def stackelberg_solve(scenario, region: RegionInputs, grid: MarginGrid, params: ModelParams) -> Equilibrium:
    """NIS-leader / OEM-follower equilibrium on the margin grid.

    Under Predatory the NIS price is held at or below the predatory cap.
    Ties resolve to the lowest leader margin, then the lowest follower margin.
    """
    scenario = Scenario.parse(scenario)
    if not scenario.has_nis:
        raise ValueError("stackelberg_solve needs a scenario with an NIS tier")
    pg = payoff_grid(scenario, region, grid.nis_values, grid.oem_values, params)
    follower = np.argmax(pg.oem, axis=1)
    rows = np.arange(len(pg.nis_values))
    leader_value = pg.nis[rows, follower]
    i = int(np.argmax(leader_value))
    j = int(follower[i])
    binding = set()
    if pg.base.price_cap is not None and pg.base.price_cap < params.catalog[region.region_class, scenario].price_per_site:
        binding.add(PREDATORY_CAP)
    if _boundary(pg.nis_values, i) or _boundary(pg.oem_values, j):
        binding.add(GRID_BOUNDARY)
    return Equilibrium(
        scenario,
        float(pg.nis_values[i]),
        float(pg.oem_values[j]),
        PayoffTriple(float(pg.mno[i, j]), float(pg.nis[i, j]), float(pg.oem[i, j])),
        frozenset(binding),
        pg.base.price,
        pg.base.price_cap,
    )


def joint_oran_optimum(region: RegionInputs, grid: MarginGrid, params: ModelParams) -> Equilibrium:
    """OEM margin maximizing MNO + OEM profit when the MNO buys direct (ties -> lowest)."""
    pg = payoff_grid(Scenario.DIRECT_OEM, region, [0.0], grid.oem_values, params)
    total = pg.mno[0] + pg.oem[0]
    j = int(np.argmax(total))
    binding = {GRID_BOUNDARY} if _boundary(pg.oem_values, j) else set()
    return Equilibrium(
        Scenario.DIRECT_OEM,
        0.0,
        float(pg.oem_values[j]),
        PayoffTriple(float(pg.mno[0, j]), 0.0, float(pg.oem[0, j])),
        frozenset(binding),
        pg.base.price,
        None,
    )


def solve_scenario(scenario, region: RegionInputs, grid: MarginGrid, params: ModelParams) -> Equilibrium:
    scenario = Scenario.parse(scenario)
    if scenario.has_nis:
        return stackelberg_solve(scenario, region, grid, params)
    return joint_oran_optimum(region, grid, params)


# -- scenario comparison -------------------------------------------------------------

REVIEW_BAND = (0.05, 0.40)


@dataclass(frozen=True)
class ComparisonRow:
    region: str
    label: str
    mno_npv: dict  # Scenario -> USD
    equilibria: dict  # Scenario -> Equilibrium
    delta_vs_traditional: float
    pct_vs_traditional: float | None
    delta_vs_predatory: float
    pct_vs_predatory: float | None
    review_flag: bool

    def as_dict(self) -> dict:
        return {
            "region": self.region,
            "label": self.label,
            **{f"mno_npv_{s.value}": v for s, v in self.mno_npv.items()},
            "delta_vs_traditional": self.delta_vs_traditional,
            "pct_vs_traditional": self.pct_vs_traditional,
            "delta_vs_predatory": self.delta_vs_predatory,
            "pct_vs_predatory": self.pct_vs_predatory,
            "review_flag": self.review_flag,
        }


def _pct(delta: float, base: float) -> float | None:
    return None if base == 0 else delta / abs(base)


def compare_scenarios(
    portfolio: Sequence[RegionInputs],
    grid: MarginGrid,
    params: ModelParams,
    review_band: tuple[float, float] = REVIEW_BAND,
) -> list[ComparisonRow]:
    """MNO NPV per scenario and the DirectOEM gain over each MRAN scenario.

    ``review_flag`` marks regions whose gain over Traditional falls outside
    ``review_band``.
    """
    if not portfolio:
        raise ValueError("portfolio is empty")
    rows = []
    for region in portfolio:
        eqs = {s: solve_scenario(s, region, grid, params) for s in ALL_SCENARIOS}
        mno = {s: eq.payoffs.mno_npv for s, eq in eqs.items()}
        d1 = mno[Scenario.DIRECT_OEM] - mno[Scenario.TRADITIONAL]
        d2 = mno[Scenario.DIRECT_OEM] - mno[Scenario.PREDATORY]
        p1 = _pct(d1, mno[Scenario.TRADITIONAL])
        flag = p1 is None or not (review_band[0] <= p1 <= review_band[1])
        rows.append(ComparisonRow(region.name, region.label, mno, eqs, d1, p1, d2, _pct(d2, mno[Scenario.PREDATORY]), flag))
    return rows
