"""Techno-economic model of RAN procurement: who earns what when an operator
buys cell sites through an integrator or directly from equipment makers.

The pipeline runs county data -> region types -> subscriber demand -> site
counts -> cash flows -> supplier margin equilibria -> portfolio optimum.
"""

from .capacity import SiteCatalog, SiteConfig, coverage_area, load_catalog, plan_sites, site_capacity
from .demand import MarketParams, MarketStructure, active_users, adjusted_arpu, annual_data_demand, annual_revenue
from .econ import GlobalParams, PayoffTriple, decompose_price, npv
from .game import (
    Equilibrium,
    MarginGrid,
    Margins,
    ModelParams,
    RegionInputs,
    compare_scenarios,
    default_portfolio,
    evaluate,
    predatory_cap,
    simulate_region,
    solve_scenario,
    stackelberg_solve,
)
from .ingest import CountyDataset, CountyRecord, load_counties, synthetic_dataset
from .optimize import Aggregation, ObjectiveSpec, margin_grid_search, sensitivity_sweep
from .regions import LABELS, calinski_harabasz, classify_densities, kmeans_fit
from .scenarios import ALL_SCENARIOS, Scenario

__version__ = "0.1.0"

__all__ = [
    "ALL_SCENARIOS",
    "Aggregation",
    "CountyDataset",
    "CountyRecord",
    "Equilibrium",
    "GlobalParams",
    "LABELS",
    "MarginGrid",
    "Margins",
    "MarketParams",
    "MarketStructure",
    "ModelParams",
    "ObjectiveSpec",
    "PayoffTriple",
    "RegionInputs",
    "Scenario",
    "SiteCatalog",
    "SiteConfig",
    "active_users",
    "adjusted_arpu",
    "annual_data_demand",
    "annual_revenue",
    "calinski_harabasz",
    "classify_densities",
    "compare_scenarios",
    "coverage_area",
    "decompose_price",
    "default_portfolio",
    "evaluate",
    "kmeans_fit",
    "load_catalog",
    "load_counties",
    "margin_grid_search",
    "npv",
    "plan_sites",
    "predatory_cap",
    "sensitivity_sweep",
    "simulate_region",
    "site_capacity",
    "solve_scenario",
    "stackelberg_solve",
    "synthetic_dataset",
]
