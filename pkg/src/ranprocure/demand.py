"""Subscribers, income-adjusted ARPU, revenue and data demand per region-year."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .ingest import GB_BYTES

MONTHS_PER_YEAR = 12
BITS_PER_BYTE = 8


class MarketStructure(str, Enum):
    COMPETITIVE = "competitive"
    OLIGOPOLY = "oligopoly"


@dataclass(frozen=True)
class MarketParams:
    national_arpu_usd_month: float = 40.0
    smartphone_rate: float = 0.89
    active_rate: float = 0.83
    market_structure: MarketStructure = MarketStructure.OLIGOPOLY
    market_share: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "market_structure", MarketStructure(self.market_structure))
        if not self.national_arpu_usd_month > 0:
            raise ValueError("national_arpu_usd_month must be > 0")
        for name in ("smartphone_rate", "active_rate"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.market_share is not None and not 0 <= self.market_share <= 1:
            raise ValueError(f"market_share must lie in [0, 1], got {self.market_share}")


@dataclass(frozen=True)
class DemandProfile:
    year: int
    users: float
    revenue: float  # USD per year
    data_demand: float  # bits per year


def active_users(p0: float, g: float, t: int, smartphone_rate: float, active_rate: float) -> float:
    """Active smartphone users in year ``t`` (t >= 1; growth exponent t-1)."""
    if g <= -1:
        raise ValueError("growth rate must be > -1")
    if t < 1:
        raise ValueError("t must be >= 1")
    return p0 * (1 + g) ** (t - 1) * smartphone_rate * active_rate


def adjusted_arpu(national_arpu: float, mhi: float, nhi: float) -> float:
    if not nhi > 0:
        raise ValueError("national household income must be > 0")
    return national_arpu * (mhi / nhi)


def annual_revenue(arpu: float, users: float, params: MarketParams) -> float:
    """Yearly revenue from a monthly ARPU.

    Oligopoly books the whole regional market; Competitive scales by the
    operator's market share.
    """
    if users < 0:
        raise ValueError("users must be >= 0")
    revenue = MONTHS_PER_YEAR * arpu * users
    if params.market_structure is MarketStructure.COMPETITIVE:
        if params.market_share is None:
            raise ValueError("competitive market needs market_share")
        revenue = revenue * params.market_share
    return revenue


def annual_data_demand(users: float, gb_per_user_month: float) -> float:
    """Bits per year."""
    return users * (gb_per_user_month * GB_BYTES * MONTHS_PER_YEAR) * BITS_PER_BYTE


def demand_profile(
    population: float,
    growth: float,
    mhi: float,
    gb_per_user_month: float,
    market: MarketParams,
    nhi: float,
    horizon: int,
) -> list[DemandProfile]:
    """Years 0..horizon-1; year 0 reuses the year-1 user count (zero growth exponent)."""
    arpu = adjusted_arpu(market.national_arpu_usd_month, mhi, nhi)
    out = []
    for t in range(horizon):
        u = active_users(population, growth, max(t, 1), market.smartphone_rate, market.active_rate)
        out.append(DemandProfile(t, u, annual_revenue(arpu, u, market), annual_data_demand(u, gb_per_user_month)))
    return out
