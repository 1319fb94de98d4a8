"""Cash flows, NPV, and per-stakeholder profits.

Year 0 is undiscounted; year t >= 1 is divided by (1 + d)**t.  Capex is
booked once at year 0 and opex is a fixed fraction of capex every later
year.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .scenarios import Scenario

DEFAULT_OPEX_RATES = {
    Scenario.TRADITIONAL: 0.12,
    Scenario.PREDATORY: 0.12,
    Scenario.DIRECT_OEM: 0.13,
}


@dataclass(frozen=True)
class GlobalParams:
    horizon: int = 10
    discount_rate: float = 0.05
    opex_rates: dict = field(default_factory=lambda: dict(DEFAULT_OPEX_RATES))

    def __post_init__(self):
        rates = {Scenario.parse(k): float(v) for k, v in self.opex_rates.items()}
        object.__setattr__(self, "opex_rates", rates)
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if not 0 < self.discount_rate < 1:
            raise ValueError("discount_rate must lie in (0, 1)")
        for s, r in rates.items():
            if r < 0:
                raise ValueError(f"opex rate for {s.value} must be >= 0")

    def opex_rate(self, scenario) -> float:
        return self.opex_rates[Scenario.parse(scenario)]


@dataclass(frozen=True)
class UnitEconomics:
    """Per-site price chain OEM cost -> OEM price -> NIS price (USD/site)."""

    oem_base_cost: float
    oem_margin: float
    oem_price: float
    nis_margin: float
    nis_price: float

    def __post_init__(self):
        for name in ("oem_base_cost", "oem_margin", "oem_price", "nis_margin", "nis_price"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class CashFlowSeries:
    yearly_net: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.yearly_net)

    def npv(self, d: float) -> float:
        return npv(self, d)


@dataclass(frozen=True)
class PayoffTriple:
    mno_npv: float
    nis_npv: float
    oem_npv: float

    def __post_init__(self):
        for v in (self.mno_npv, self.nis_npv, self.oem_npv):
            if not math.isfinite(v):
                raise ValueError("payoffs must be finite")

    @property
    def total(self) -> float:
        return self.mno_npv + self.nis_npv + self.oem_npv

    def as_dict(self) -> dict:
        return {"mno_npv": self.mno_npv, "nis_npv": self.nis_npv, "oem_npv": self.oem_npv}


def annuity_factor(d: float, n: int) -> float:
    """Sum of 1/(1+d)^t for t = 1..n-1 (the discounted opex years)."""
    if d == 0:
        return float(n - 1)
    return (1 - (1 + d) ** -(n - 1)) / d


def npv(cashflows, d: float) -> float:
    values = cashflows.yearly_net if isinstance(cashflows, CashFlowSeries) else tuple(cashflows)
    if not 0 <= d < 1:
        raise ValueError("discount rate must lie in [0, 1)")
    if not values:
        return 0.0
    total = values[0]
    for t in range(1, len(values)):
        total += values[t] / (1 + d) ** t
    return total


def mno_cashflows(
    revenue_by_year: Sequence[float],
    sites: int,
    price_per_site: float,
    opex_rate: float,
    horizon: int,
) -> CashFlowSeries:
    if len(revenue_by_year) != horizon:
        raise ValueError(f"revenue has {len(revenue_by_year)} years, horizon is {horizon}")
    if sites < 0:
        raise ValueError("sites must be >= 0")
    capex = sites * price_per_site
    opex = capex * opex_rate
    flows = [revenue_by_year[0] - capex]
    flows.extend(r - opex for r in revenue_by_year[1:])
    return CashFlowSeries(tuple(flows))


def nis_profit_npv(sites: int, nis_margin, opex_rate: float, d: float, horizon: int):
    """Capex margin at year 0 plus the same margin on every discounted opex year.

    ``nis_margin`` may be an array; the arithmetic order matches the scalar path.
    """
    if sites < 0:
        raise ValueError("sites must be >= 0")
    capex_margin = sites * nis_margin
    total = capex_margin
    for t in range(1, horizon):
        total = total + capex_margin * opex_rate / (1 + d) ** t
    return total


def oem_profit(sites: int, oem_margin):
    """One-off year-0 margin on every site shipped."""
    if sites < 0:
        raise ValueError("sites must be >= 0")
    return sites * oem_margin


def price_chain(catalog_price, nis_frac, oem_frac, has_nis: bool = True):
    """Absolute margins from fractional ones: ``(nis_margin, oem_price, oem_margin, base_cost)``.

    Works elementwise on arrays so grid solvers and ``decompose_price`` share
    one arithmetic path.
    """
    if has_nis:
        nis_margin = nis_frac * catalog_price
        oem_price = catalog_price - nis_margin
    else:
        nis_margin = 0.0 * catalog_price
        oem_price = catalog_price
    oem_margin = oem_frac * oem_price
    return nis_margin, oem_price, oem_margin, oem_price - oem_margin


def decompose_price(catalog_price: float, nis_margin_frac: float, oem_margin_frac: float, scenario) -> UnitEconomics:
    """Split the MNO's per-site price into OEM cost, OEM margin and NIS margin.

    Margin fractions are taken on each tier's selling price.  DirectOEM has
    no NIS tier, so the OEM sells at the catalog price.
    """
    scenario = Scenario.parse(scenario)
    for name, f in (("nis_margin_frac", nis_margin_frac), ("oem_margin_frac", oem_margin_frac)):
        if not 0 <= f < 1:
            raise ValueError(f"{name} must lie in [0, 1), got {f}")
    if catalog_price < 0:
        raise ValueError("catalog_price must be >= 0")
    if not scenario.has_nis and nis_margin_frac != 0:
        raise ValueError("DirectOEM has no NIS tier; nis_margin_frac must be 0")
    nis_margin, oem_price, oem_margin, base = price_chain(
        catalog_price, nis_margin_frac, oem_margin_frac, scenario.has_nis
    )
    if base < 0:
        raise ValueError("margins imply a negative OEM base cost")
    return UnitEconomics(
        oem_base_cost=base,
        oem_margin=oem_margin,
        oem_price=oem_price,
        nis_margin=nis_margin,
        nis_price=catalog_price,
    )

