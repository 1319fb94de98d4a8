"""Report assembly and export (CSV tables, JSON documents with an audit block)."""

from __future__ import annotations

import csv
import json
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Sequence

from .econ import PayoffTriple
from .game import (
    ComparisonRow,
    MarginGrid,
    Margins,
    ModelParams,
    RegionInputs,
    RegionRun,
    simulate_region,
    solve_scenario,
)
from .scenarios import Scenario


def timestamp() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


def write_json(path, doc: dict) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, allow_nan=False) + "\n", encoding="utf-8")


def write_csv(path, rows: Sequence[dict], columns: Sequence[str] | None = None) -> None:
    if columns is None:
        columns = list(rows[0].keys()) if rows else []
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=list(columns), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: ("" if r.get(k) is None else r.get(k)) for k in columns})


def with_header(body: dict, audit: dict) -> dict:
    """Wrap a report body; the timestamp lives only in the header."""
    return {"header": {"generated_at": timestamp(), "tool": "ranprocure"}, "audit": audit, **body}


# -- simulate -------------------------------------------------------------------------


def run_record(run: RegionRun) -> dict:
    b = run.base
    return {
        "region": b.region.name,
        "label": b.region.label,
        "scenario": b.scenario.value,
        "nis_margin_frac": run.margins.nis,
        "oem_margin_frac": run.margins.oem,
        "sites": b.sites,
        "sites_by_demand_y0": b.plans[0].sites_by_demand if b.plans else 0,
        "sites_by_coverage": b.plans[0].sites_by_coverage if b.plans else 0,
        "mno_unit_price": b.price,
        "price_cap": b.price_cap,
        "oem_base_cost": run.unit.oem_base_cost,
        "oem_margin": run.unit.oem_margin,
        "nis_margin": run.unit.nis_margin,
        **run.payoffs.as_dict(),
    }


def simulate_portfolio(
    regions: Iterable[RegionInputs],
    scenarios: Sequence[Scenario],
    grid: MarginGrid,
    params: ModelParams,
    margins: Margins | None = None,
) -> list[RegionRun]:
    """One run per (region, scenario): at fixed margins, or at the scenario's equilibrium."""
    scenarios = [Scenario.parse(s) for s in scenarios]
    runs = []
    for region in regions:
        for s in scenarios:
            if margins is None:
                eq = solve_scenario(s, region, grid, params)
                m = Margins(eq.nis_margin_frac, eq.oem_margin_frac)
            else:
                m = Margins(margins.nis if s.has_nis else 0.0, margins.oem)
            runs.append(simulate_region(s, region, m, params))
    return runs


def simulate_report(runs: Sequence[RegionRun], audit: dict) -> dict:
    return with_header(
        {
            "regions": [asdict(r) for r in dict.fromkeys(run.base.region for run in runs)],
            "runs": [run_record(r) for r in runs],
        },
        audit,
    )


def cashflow_rows(runs: Sequence[RegionRun], params: ModelParams) -> list[dict]:
    """Long-format rows (scenario, region, year, stakeholder, value)."""
    rows = []
    g = params.globals
    for run in runs:
        b = run.base
        for t, v in enumerate(b.cashflows.yearly_net):
            rows.append({"scenario": b.scenario.value, "region": b.region.name, "year": t, "stakeholder": "mno", "value": v})
        for t in range(g.horizon):
            nis = b.sites * run.unit.nis_margin * (1.0 if t == 0 else b.opex_rate)
            oem = b.sites * run.unit.oem_margin if t == 0 else 0.0
            rows.append({"scenario": b.scenario.value, "region": b.region.name, "year": t, "stakeholder": "nis", "value": nis})
            rows.append({"scenario": b.scenario.value, "region": b.region.name, "year": t, "stakeholder": "oem", "value": oem})
    for run in runs:
        b = run.base
        for who, v in (("mno", run.payoffs.mno_npv), ("nis", run.payoffs.nis_npv), ("oem", run.payoffs.oem_npv)):
            rows.append({"scenario": b.scenario.value, "region": b.region.name, "year": "npv", "stakeholder": who, "value": v})
    return rows


def recompute_payoffs(report: dict) -> list[tuple[str, Scenario, PayoffTriple]]:
    """Re-evaluate every run of a simulate report from its embedded parameters only."""
    params = ModelParams.from_dict(report["audit"]["parameters"])
    regions = {r["name"]: RegionInputs(**r) for r in report["regions"]}
    out = []
    for rec in report["runs"]:
        s = Scenario.parse(rec["scenario"])
        run = simulate_region(s, regions[rec["region"]], Margins(rec["nis_margin_frac"], rec["oem_margin_frac"]), params)
        out.append((rec["region"], s, run.payoffs))
    return out


# -- compare ------------------------------------------------------------------------------


def comparison_report(rows: Sequence[ComparisonRow], audit: dict, review_band=(0.05, 0.40)) -> dict:
    return with_header(
        {
            "review_band": list(review_band),
            "rows": [r.as_dict() for r in rows],
            "equilibria": {r.region: {s.value: eq.as_dict() for s, eq in r.equilibria.items()} for r in rows},
            "flagged_for_review": [r.region for r in rows if r.review_flag],
        },
        audit,
    )


def comparison_series(rows: Sequence[ComparisonRow]) -> list[dict]:
    """Plot-ready long format: x = region label, series = scenario, y = MNO NPV."""
    return [{"x": r.region, "series": s.value, "y": v} for r in rows for s, v in r.mno_npv.items()]
