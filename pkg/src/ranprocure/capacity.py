"""Site capacity, coverage, and site-count dimensioning."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .regions import REGION_CLASSES
from .scenarios import Scenario

SECONDS_PER_MONTH = 2_592_000  # 30-day month
MONTHS_PER_YEAR = 12
HZ_PER_MHZ = 1e6


@dataclass(frozen=True)
class SiteConfig:
    bandwidth_mhz: float
    spectral_efficiency: float
    sectors: int
    price_per_site: float
    opex_rate: float
    coverage_radius_km: float | None = None
    coverage_area_sqkm: float | None = None
    interference: float = 0.0
    description: str = ""

    def __post_init__(self):
        if not self.bandwidth_mhz > 0:
            raise ValueError("bandwidth_mhz must be > 0")
        if not self.spectral_efficiency > 0:
            raise ValueError("spectral_efficiency must be > 0")
        if self.sectors < 1:
            raise ValueError("sectors must be >= 1")
        if not 0 <= self.interference < 1:
            raise ValueError("interference must lie in [0, 1)")
        if self.price_per_site < 0 or self.opex_rate < 0:
            raise ValueError("price_per_site and opex_rate must be >= 0")
        if self.coverage_radius_km is None and self.coverage_area_sqkm is None:
            raise ValueError("need coverage_radius_km or coverage_area_sqkm")
        if self.coverage_radius_km is not None and self.coverage_area_sqkm is not None:
            derived = coverage_area(self.coverage_radius_km, self.interference)
            if abs(derived - self.coverage_area_sqkm) > 0.005 * self.coverage_area_sqkm:
                raise ValueError(
                    f"coverage area {self.coverage_area_sqkm} inconsistent with radius "
                    f"{self.coverage_radius_km} km (expected {derived:.2f})"
                )

    @property
    def area_per_site(self) -> float:
        if self.coverage_radius_km is not None:
            return coverage_area(self.coverage_radius_km, self.interference)
        return self.coverage_area_sqkm

    @property
    def capacity(self) -> float:
        return site_capacity(self)


@dataclass(frozen=True)
class SitePlan:
    year: int
    sites_by_demand: int
    sites_by_coverage: int
    sites_required: int


def site_capacity(config: SiteConfig) -> float:
    """Bits per year one site can carry."""
    return (
        config.bandwidth_mhz * HZ_PER_MHZ
        * config.spectral_efficiency
        * config.sectors
        * SECONDS_PER_MONTH
        * MONTHS_PER_YEAR
    )


def coverage_area(radius_km: float, interference: float = 0.0) -> float:
    return math.pi * radius_km**2 * (1 - interference)


def _ceil_ratio(num: float, den: float) -> int:
    if num <= 0:
        return 0
    n = math.ceil(num / den)
    # the rounded quotient can land on an integer just below the true ratio
    while n * den < num:
        n += 1
    return n


def sites_by_demand(demand: float, capacity: float) -> int:
    if not capacity > 0:
        raise ValueError("site capacity must be > 0")
    return _ceil_ratio(demand, capacity)


def sites_by_coverage(total_area: float, area_per_site: float) -> int:
    if not area_per_site > 0:
        raise ValueError("area per site must be > 0")
    return _ceil_ratio(total_area, area_per_site)


def sites_required(by_demand: int, by_coverage: int) -> int:
    return max(by_demand, by_coverage)


def plan_sites(demand_by_year: Sequence[float], land_area_sqkm: float, config: SiteConfig) -> list[SitePlan]:
    cap = site_capacity(config)
    cov = sites_by_coverage(land_area_sqkm, config.area_per_site)
    plans = []
    for t, d in enumerate(demand_by_year):
        dem = sites_by_demand(d, cap)
        plans.append(SitePlan(t, dem, cov, sites_required(dem, cov)))
    return plans


def deployed_sites(plans: Sequence[SitePlan]) -> int:
    """Fleet built at year 0: the largest yearly requirement over the horizon."""
    return max((p.sites_required for p in plans), default=0)


# -- catalog -------------------------------------------------------------------


class SiteCatalog(Mapping):
    """SiteConfig per ``(region_class, scenario)``."""

    def __init__(self, entries: Mapping[tuple[str, Scenario], SiteConfig], name: str = "custom"):
        self._entries = dict(entries)
        self.name = name
        for rc in REGION_CLASSES:
            for s in Scenario:
                if (rc, s) not in self._entries:
                    raise KeyError(f"catalog {name!r} lacks an entry for ({rc}, {s.value})")

    def __getitem__(self, key):
        rc, scenario = key
        return self._entries[(rc, Scenario.parse(scenario))]

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def replace(self, region_class: str, scenario: Scenario, **changes) -> "SiteCatalog":
        from dataclasses import replace

        entries = dict(self._entries)
        key = (region_class, Scenario.parse(scenario))
        entries[key] = replace(entries[key], **changes)
        return SiteCatalog(entries, self.name)

    def map(self, fn) -> "SiteCatalog":
        return SiteCatalog({k: fn(k, v) for k, v in self._entries.items()}, self.name)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "entries": [
                {"region_class": rc, "scenario": s.value, **asdict(cfg)}
                for (rc, s), cfg in self._entries.items()
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SiteCatalog":
        entries = {}
        for e in d["entries"]:
            e = dict(e)
            key = (e.pop("region_class"), Scenario.parse(e.pop("scenario")))
            entries[key] = SiteConfig(**e)
        return cls(entries, d.get("name", "custom"))


def load_catalog(path=None, variant: str = "baseline") -> SiteCatalog:
    """Load a catalog file; the packaged one carries several named variants."""
    if path is None:
        text = resources.files("ranprocure").joinpath("data/site_catalog.json").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    doc = json.loads(text)
    if "variants" in doc:
        if variant not in doc["variants"]:
            raise KeyError(f"unknown catalog variant {variant!r}")
        d = dict(doc["variants"][variant])
        d.setdefault("name", variant)
        return SiteCatalog.from_dict(d)
    return SiteCatalog.from_dict(doc)
