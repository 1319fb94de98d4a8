# %% [markdown]
# # Searching for the margin pair that maximizes portfolio profit
#
# Instead of letting each supplier optimize on its own, we ask which single
# (integrator margin, OEM margin) pair maximizes the summed profit across
# the whole portfolio. The search is an exhaustive scan of the margin
# grid, vectorized over the whole grid at once.

# %%
import time

from ranprocure.game import ModelParams
from ranprocure.optimize import Aggregation, ObjectiveSpec, contributions, margin_grid_search, sensitivity_sweep

params = ModelParams()
spec = ObjectiveSpec.default()

t0 = time.perf_counter()
opt = margin_grid_search(spec, params)
print(f"optimum NIS {100 * opt.nis_margin_frac:.2f}%, OEM {100 * opt.oem_margin_frac:.2f}%")
print(f"objective {opt.objective_value / 1e9:.4f} B USD from {opt.evaluations:,} evaluations "
      f"in {1e3 * (time.perf_counter() - t0):.1f} ms")

# %% [markdown]
# Operator NPV does not depend on how the fixed catalog price is split
# between suppliers. The total objective therefore rises with both margins
# and the optimum sits at the corner of the grid. A different objective
# shows how the answer depends on whose profit counts.

# %%
for agg in Aggregation:
    o = margin_grid_search(ObjectiveSpec.default(aggregation=agg), params)
    print(f"{agg.value:<13} -> NIS {o.nis_margin_frac:.2f}, OEM {o.oem_margin_frac:.2f}")

# %% [markdown]
# ## Stakeholder split at the optimum

# %%
for s, c in contributions(spec, params, opt.nis_margin_frac, opt.oem_margin_frac).items():
    print(f"{s:<12} " + "  ".join(f"{who} {v / 1e6:10,.2f} M" for who, v in c.items()))

# %% [markdown]
# ## Sensitivity
#
# Raising theta tightens the predatory cap, which moves value from the
# integrator back to the operator. The discount rate scales every
# post-deployment flow.

# %%
for name, values in (("theta", [0.0, 0.0833, 0.5, 1.0]), ("discount_rate", [0.01, 0.05, 0.10])):
    for row in sensitivity_sweep(spec, params, name, values):
        pred = row.contributions["predatory"]
        print(f"{name}={row.value:<7} objective {row.optimum.objective_value / 1e9:8.4f} B  "
              f"predatory NIS {pred['nis'] / 1e6:7.2f} M  predatory MNO {pred['mno'] / 1e6:9.2f} M")
