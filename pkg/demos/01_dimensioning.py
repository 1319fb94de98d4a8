# %% [markdown]
# # How many sites does a region need?
#
# A region's site count is the larger of two requirements. One is enough
# capacity to carry the subscribers' yearly traffic. The other is enough
# cells to blanket the land area. Dense places are capacity-bound and
# sparse ones are coverage-bound. This script walks through both for
# the eight region profiles.

# %%
from ranprocure.capacity import load_catalog
from ranprocure.demand import demand_profile
from ranprocure.game import ModelParams, default_portfolio, region_base
from ranprocure.scenarios import ALL_SCENARIOS, Scenario

catalog = load_catalog()
params = ModelParams()

# %% [markdown]
# ## Site configurations
#
# Each (region class, procurement scenario) pair has its own site
# configuration. Capacity is bandwidth times spectral efficiency times
# sectors, accumulated over a year of 30-day months.

# %%
print(f"{'class':<20}{'scenario':<13}{'capacity (bit/yr)':>20}{'area (km2)':>12}{'price':>10}")
for (rc, s), cfg in catalog.items():
    print(f"{rc:<20}{s.value:<13}{cfg.capacity:>20.4e}{cfg.area_per_site:>12.2f}{cfg.price_per_site:>10,.0f}")

# %% [markdown]
# ## Demand over the horizon
#
# Subscribers grow slowly, so traffic rises a little each year. The fleet
# is sized once, for the peak year.

# %%
urban = default_portfolio()[0]
prof = demand_profile(
    urban.population, urban.pop_growth_rate, urban.median_household_income,
    urban.data_demand_gb_per_user_month, params.market, params.national_household_income, 10,
)
for p in prof[:3] + prof[-1:]:
    print(f"year {p.year}: {p.users:>10,.0f} users  {p.revenue / 1e6:>8.1f} M USD  {p.data_demand:.3e} bit")

# %% [markdown]
# ## Which constraint binds?

# %%
print(f"{'region':<11}{'by demand':>10}{'by coverage':>13}{'deployed':>10}  binding")
for region in default_portfolio():
    base = region_base(Scenario.TRADITIONAL, region, params)
    y0 = base.plans[0]
    kind = "demand" if y0.sites_by_demand >= y0.sites_by_coverage else "coverage"
    print(f"{region.name:<11}{y0.sites_by_demand:>10}{y0.sites_by_coverage:>13}{base.sites:>10}  {kind}")

# %% [markdown]
# The direct-procurement urban site has roughly twice the capacity, so it
# needs fewer sites where demand dominates.

# %%
for s in ALL_SCENARIOS:
    print(f"Urban under {s.value:<12}: {region_base(s, urban, params).sites} sites")
