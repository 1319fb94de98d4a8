"""Independent reference implementations used as test oracles.

Everything here goes through the scalar ``evaluate`` path one margin pair at
a time with plain Python loops, so it shares no search code with the solvers
under test.
"""

from __future__ import annotations

import random
from dataclasses import replace

from ranprocure.econ import GlobalParams
from ranprocure.game import MarginGrid, Margins, ModelParams, RegionInputs, evaluate
from ranprocure.regions import LABELS
from ranprocure.scenarios import ALL_SCENARIOS, Scenario


def brute_stackelberg(scenario, region, nis_values, oem_values, params):
    """(nis, oem, payoffs) by leader-over-follower enumeration with first-max ties."""
    best = None
    for fs in nis_values:
        follower = None
        for fo in oem_values:
            p = evaluate(scenario, region, Margins(float(fs), float(fo)), params)
            if follower is None or p.oem_npv > follower[1].oem_npv:
                follower = (float(fo), p)
        if best is None or follower[1].nis_npv > best[2].nis_npv:
            best = (float(fs), follower[0], follower[1])
    return best


def brute_portfolio(entries, nis_values, oem_values, params, aggregation="total"):
    """(nis, oem, value) maximizing the summed objective; first max in row-major order."""

    def score(p):
        if aggregation == "total":
            return p.mno_npv + p.nis_npv + p.oem_npv
        if aggregation == "mno_only":
            return p.mno_npv
        return p.nis_npv + p.oem_npv

    best = None
    for fs in nis_values:
        for fo in oem_values:
            total = 0.0
            for scenario, region in entries:
                m = Margins(float(fs) if scenario.has_nis else 0.0, float(fo))
                total += score(evaluate(scenario, region, m, params))
            if best is None or total > best[2]:
                best = (float(fs), float(fo), total)
    return best


def random_region(rng: random.Random, name="R") -> RegionInputs:
    label = rng.choice(LABELS)
    if rng.random() < 0.5:
        pop = 10 ** rng.uniform(5, 6.5)
        area = 10 ** rng.uniform(1.5, 3)
    else:
        pop = 10 ** rng.uniform(3, 5)
        area = 10 ** rng.uniform(2.5, 4)
    return RegionInputs(
        name=name,
        label=label,
        population=pop,
        pop_growth_rate=rng.uniform(-0.01, 0.03),
        land_area_sqkm=area,
        median_household_income=rng.uniform(35_000, 120_000),
        data_demand_gb_per_user_month=rng.uniform(5, 200),
    )


def random_params(rng: random.Random) -> ModelParams:
    base = ModelParams()
    g = GlobalParams(
        horizon=rng.randint(3, 15),
        discount_rate=rng.uniform(0, 0.15),
        opex_rates={s: rng.uniform(0.05, 0.2) for s in ALL_SCENARIOS},
    )
    return replace(base, globals=g, theta=rng.choice([0.0, 0.0833, rng.uniform(0, 1), 1.0]))


def random_grid(rng: random.Random) -> MarginGrid:
    n_nis, n_oem = rng.randint(5, 11), rng.randint(5, 11)
    nis_step = round(rng.choice([0.01, 0.02, 0.05]), 2)
    oem_step = round(rng.choice([0.01, 0.02, 0.03]), 2)
    nis_min = round(rng.uniform(0, 0.3), 2)
    oem_min = round(rng.uniform(0, 0.3), 2)
    return MarginGrid(
        nis_min, round(nis_min + nis_step * (n_nis - 1), 2), nis_step,
        oem_min, round(oem_min + oem_step * (n_oem - 1), 2), oem_step,
    )


def equalized(params: ModelParams, price: float | None = None, opex: float | None = None) -> ModelParams:
    """Same site configuration, price and opex rate for every scenario of each region class."""
    cat = params.catalog

    def same(key, cfg):
        rc, _ = key
        ref = cat[rc, Scenario.TRADITIONAL]
        return replace(ref, price_per_site=price if price is not None else ref.price_per_site)

    rate = opex if opex is not None else params.globals.opex_rate(Scenario.TRADITIONAL)
    g = GlobalParams(params.globals.horizon, params.globals.discount_rate, {s: rate for s in ALL_SCENARIOS})
    return replace(params, catalog=cat.map(same), globals=g)
