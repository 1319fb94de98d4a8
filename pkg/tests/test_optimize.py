import random
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import brute_portfolio, random_params, random_region

from ranprocure.game import MarginGrid, RegionInputs
from ranprocure.optimize import (
    Aggregation,
    ObjectiveSpec,
    contributions,
    margin_grid_search,
    objective_surface,
    per_scenario_search,
    post_year0_flows_nonnegative,
    sensitivity_sweep,
    with_parameter,
)
from ranprocure.scenarios import ALL_SCENARIOS, Scenario

GRID3 = MarginGrid(0.1, 0.3, 0.1, 0.0, 0.2, 0.1)


@pytest.mark.parametrize("aggregation", list(Aggregation))
@pytest.mark.parametrize("seed", range(4))
def test_3x3_matches_nested_loops(seed, aggregation):
    rng = random.Random(seed)
    params = random_params(rng)
    entries = tuple((rng.choice(ALL_SCENARIOS), random_region(rng, f"R{i}")) for i in range(4))
    spec = ObjectiveSpec(entries, GRID3, aggregation)
    opt = margin_grid_search(spec, params)
    fs, fo, value = brute_portfolio(entries, GRID3.nis_values, GRID3.oem_values, params, aggregation.value)
    assert (opt.nis_margin_frac, opt.oem_margin_frac) == (fs, fo)
    assert opt.objective_value == pytest.approx(value, rel=1e-12)
    assert opt.evaluations == 9 * 4


def test_surface_matches_nested_loops_everywhere(urban, rural5, params):
    entries = tuple((s, r) for r in (urban, rural5) for s in ALL_SCENARIOS)
    spec = ObjectiveSpec(entries, GRID3)
    surf = objective_surface(spec, params)
    for i, fs in enumerate(GRID3.nis_values):
        for j, fo in enumerate(GRID3.oem_values):
            one = MarginGrid.single(float(fs), float(fo))
            _, _, v = brute_portfolio(entries, one.nis_values, one.oem_values, params)
            assert surf[i, j] == pytest.approx(v, rel=1e-12)


def test_zero_demand_portfolio_takes_grid_minimum(params):
    empty = RegionInputs("empty", "Rural3", 0, 0, 0, 60_000, 0)
    grid = MarginGrid(0.05, 0.5, 0.05, 0.02, 0.3, 0.02)
    opt = margin_grid_search(ObjectiveSpec.default([empty], grid=grid), params)
    assert (opt.nis_margin_frac, opt.oem_margin_frac) == (0.05, 0.02)
    assert opt.objective_value == 0


def test_single_point_grid(params):
    opt = margin_grid_search(ObjectiveSpec.default(grid=MarginGrid.single(0.2, 0.1)), params)
    assert (opt.nis_margin_frac, opt.oem_margin_frac) == (0.2, 0.1)


def test_default_portfolio_orders_margins(params):
    opt = margin_grid_search(ObjectiveSpec.default(), params)
    assert opt.nis_margin_frac > opt.oem_margin_frac
    assert opt.evaluations == 61 * 41 * 24


def test_per_scenario_search_covers_each_scenario(params):
    spec = ObjectiveSpec.default(grid=GRID3)
    res = per_scenario_search(spec, params)
    assert set(res) == set(ALL_SCENARIOS)
    assert res[Scenario.DIRECT_OEM].nis_margin_frac == GRID3.nis_min  # flat along NIS, tie-break


def test_contributions_add_up(params):
    spec = ObjectiveSpec.default(grid=GRID3)
    opt = margin_grid_search(spec, params)
    c = contributions(spec, params, opt.nis_margin_frac, opt.oem_margin_frac)
    assert sum(v for s in c.values() for v in s.values()) == pytest.approx(opt.objective_value, rel=1e-12)
    assert c["direct_oem"]["nis"] == 0


def test_empty_portfolio_is_rejected():
    with pytest.raises(ValueError):
        ObjectiveSpec(())


def test_theta_sweep_zero_and_one(params):
    spec = ObjectiveSpec.default(grid=GRID3)
    rows = sensitivity_sweep(spec, params, "theta", [0.0, 1.0])
    assert [r.value for r in rows] == [0.0, 1.0]
    assert rows[1].contributions["predatory"]["nis"] == 0
    assert rows[0].contributions["predatory"]["nis"] > 0


def test_singleton_sweep_equals_search(params):
    spec = ObjectiveSpec.default(grid=GRID3)
    (row,) = sensitivity_sweep(spec, params, "discount_rate", [0.05])
    assert row.optimum == margin_grid_search(spec, params)


def test_objective_nonincreasing_in_discount_rate(params):
    spec = ObjectiveSpec.default()
    assert post_year0_flows_nonnegative(spec, params)
    rates = [0.01 * i for i in range(1, 11)]
    for d in rates:
        assert post_year0_flows_nonnegative(spec, with_parameter(params, "discount_rate", d))
    values = [r.optimum.objective_value for r in sensitivity_sweep(spec, params, "discount_rate", rates)]
    assert all(b <= a for a, b in zip(values, values[1:]))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_discount_monotonicity_property(seed):
    rng = random.Random(seed)
    params = random_params(rng)
    spec = ObjectiveSpec(tuple((rng.choice(ALL_SCENARIOS), random_region(rng, f"R{i}")) for i in range(3)), GRID3)
    d1 = rng.uniform(0, 0.1)
    d2 = d1 + rng.uniform(0.001, 0.1)
    p1 = with_parameter(params, "discount_rate", d1)
    p2 = with_parameter(params, "discount_rate", d2)
    if not (post_year0_flows_nonnegative(spec, p1) and post_year0_flows_nonnegative(spec, p2)):
        return
    assert margin_grid_search(spec, p2).objective_value <= margin_grid_search(spec, p1).objective_value * (1 + 1e-12)


def test_with_parameter_variants(params):
    assert with_parameter(params, "opex_rate.direct_oem", 0.2).globals.opex_rate(Scenario.DIRECT_OEM) == 0.2
    assert with_parameter(params, "national_arpu", 55).market.national_arpu_usd_month == 55
    assert with_parameter(params, "theta", 0.5).theta == 0.5
    with pytest.raises(ValueError):
        with_parameter(params, "bogus", 1)
    with pytest.raises(ValueError):
        sensitivity_sweep(ObjectiveSpec.default(grid=GRID3), params, "bogus", [1])


def test_mno_only_objective_is_flat(params):
    spec = replace(ObjectiveSpec.default(grid=GRID3), aggregation=Aggregation.MNO_ONLY)
    opt = margin_grid_search(spec, params)
    assert (opt.nis_margin_frac, opt.oem_margin_frac) == (GRID3.nis_min, GRID3.oem_min)
