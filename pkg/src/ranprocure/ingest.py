"""County records: CSV ingestion, validation, and a seeded synthetic generator.

A dataset-level metadata line may precede the CSV header::

    # national_household_income=72000

When absent, the national household income defaults to the
population-weighted mean of the county median household incomes.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np
from scipy.stats import norm, qmc

from .regions import LABELS, RegionType, region_profile, region_type

GB_BYTES = 1e9  # decimal gigabyte

CSV_COLUMNS = (
    "fips_id",
    "name",
    "population",
    "pop_growth_rate",
    "land_area_sqkm",
    "median_household_income",
    "existing_cells",
    "data_demand_gb_per_user_month",
)

NHI_KEY = "national_household_income"


class IngestError(Exception):
    """Base class for data problems (exit code 1 in the CLI)."""


class SchemaError(IngestError):
    pass


class RecordValidationError(IngestError):
    def __init__(self, fips_id: str, message: str, line: int | None = None):
        self.fips_id = fips_id
        self.message = message
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{fips_id}{where}: {message}")


class DatasetError(IngestError):
    pass


@dataclass(frozen=True)
class CountyRecord:
    fips_id: str
    name: str
    population: float
    pop_growth_rate: float
    land_area_sqkm: float
    median_household_income: float
    existing_cells: int
    data_demand_gb_per_user_month: float

    def __post_init__(self):
        problems = []
        if not math.isfinite(self.land_area_sqkm) or self.land_area_sqkm <= 0:
            problems.append(f"land_area_sqkm must be > 0, got {self.land_area_sqkm}")
        if not math.isfinite(self.population) or self.population < 0:
            problems.append(f"population must be >= 0, got {self.population}")
        if not math.isfinite(self.median_household_income) or self.median_household_income <= 0:
            problems.append(f"median_household_income must be > 0, got {self.median_household_income}")
        if self.existing_cells < 0:
            problems.append(f"existing_cells must be >= 0, got {self.existing_cells}")
        if not math.isfinite(self.data_demand_gb_per_user_month) or self.data_demand_gb_per_user_month < 0:
            problems.append("data_demand_gb_per_user_month must be >= 0")
        if not math.isfinite(self.pop_growth_rate) or self.pop_growth_rate <= -1:
            problems.append(f"pop_growth_rate must be > -1, got {self.pop_growth_rate}")
        if problems:
            raise RecordValidationError(self.fips_id, "; ".join(problems))

    @property
    def pop_density(self) -> float:
        return self.population / self.land_area_sqkm

    @property
    def cell_density(self) -> float:
        return self.existing_cells / self.land_area_sqkm

    def as_row(self) -> list[str]:
        return [str(getattr(self, f.name)) for f in fields(self)]


def population_weighted_income(records: Iterable[CountyRecord]) -> float:
    num = 0.0
    den = 0.0
    for r in records:
        num += r.population * r.median_household_income
        den += r.population
    if den <= 0:
        raise DatasetError("cannot derive national household income from zero total population")
    return num / den


@dataclass(frozen=True)
class CountyDataset:
    records: tuple[CountyRecord, ...]
    national_household_income: float

    def __post_init__(self):
        seen = set()
        for r in self.records:
            if r.fips_id in seen:
                raise DatasetError(f"duplicate fips_id {r.fips_id!r}")
            seen.add(r.fips_id)
        if not self.national_household_income > 0:
            raise DatasetError("national_household_income must be > 0")

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[CountyRecord]:
        return iter(self.records)

    @classmethod
    def from_records(cls, records: Iterable[CountyRecord], national_household_income: float | None = None):
        records = tuple(records)
        if national_household_income is None:
            national_household_income = population_weighted_income(records)
        return cls(records, float(national_household_income))


# -- CSV -------------------------------------------------------------------------


def _read(path) -> tuple[dict[str, str], list[tuple[int, dict[str, str]]]]:
    meta: dict[str, str] = {}
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    body_start = 0
    for i, line in enumerate(lines):
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if sep:
                meta[key.strip()] = value.strip()
            body_start = i + 1
            continue
        break
    reader = csv.DictReader(lines[body_start:])
    header = reader.fieldnames or []
    for col in CSV_COLUMNS:
        if col not in header:
            raise SchemaError(f"missing column {col!r}")
    rows = [(body_start + 2 + i, row) for i, row in enumerate(reader)]
    return meta, rows


def _parse_row(line: int, row: dict[str, str]) -> CountyRecord:
    fips = (row.get("fips_id") or "").strip()
    try:
        values = dict(
            fips_id=fips,
            name=row["name"],
            population=float(row["population"]),
            pop_growth_rate=float(row["pop_growth_rate"]),
            land_area_sqkm=float(row["land_area_sqkm"]),
            median_household_income=float(row["median_household_income"]),
            existing_cells=int(row["existing_cells"]),
            data_demand_gb_per_user_month=float(row["data_demand_gb_per_user_month"]),
        )
    except (TypeError, ValueError) as exc:
        raise RecordValidationError(fips or "?", f"unparseable value: {exc}", line) from None
    if not fips:
        raise RecordValidationError("?", "empty fips_id", line)
    try:
        return CountyRecord(**values)
    except RecordValidationError as exc:
        raise RecordValidationError(fips, exc.message, line) from None


def load_counties(path, national_household_income: float | None = None) -> CountyDataset:
    """Read and validate a county CSV.

    ``national_household_income`` overrides any metadata line in the file.
    """
    meta, rows = _read(path)
    records = [_parse_row(line, row) for line, row in rows]
    nhi = national_household_income
    if nhi is None and NHI_KEY in meta:
        try:
            nhi = float(meta[NHI_KEY])
        except ValueError:
            raise DatasetError(f"bad {NHI_KEY} metadata value {meta[NHI_KEY]!r}") from None
    return CountyDataset.from_records(records, nhi)


def validate_counties(path) -> list[str]:
    """Every problem in the file, one message per issue (empty when clean)."""
    meta, rows = _read(path)
    errors = []
    seen = set()
    for line, row in rows:
        try:
            _parse_row(line, row)
        except RecordValidationError as exc:
            errors.append(str(exc))
        fips = (row.get("fips_id") or "").strip()
        if fips and fips in seen:
            errors.append(f"{fips} (line {line}): duplicate fips_id")
        seen.add(fips)
    if NHI_KEY in meta:
        try:
            if not float(meta[NHI_KEY]) > 0:
                errors.append(f"{NHI_KEY} must be > 0")
        except ValueError:
            errors.append(f"bad {NHI_KEY} metadata value {meta[NHI_KEY]!r}")
    return errors


def write_counties(dataset: CountyDataset, path, include_nhi: bool = True) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if include_nhi:
            fh.write(f"# {NHI_KEY}={dataset.national_household_income!r}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in dataset.records:
            w.writerow(r.as_row())


# -- synthetic generator ---------------------------------------------------------

# log-uniform densities need a positive lower edge
MIN_SYNTHETIC_DENSITY = 0.5
AREA_BAND = (0.5, 1.5)  # land area drawn uniform in this multiple of the profile's central area
GROWTH_BAND = (-0.005, 0.015)
INCOME_CV = 0.12
DEMAND_BAND = (0.75, 1.25)
CELL_DENSITY_BAND = (0.5, 1.5)


def _density_band(label: str) -> tuple[float, float]:
    p = region_profile(label)
    return max(p.pop_density_min, MIN_SYNTHETIC_DENSITY), float(p.pop_density_max)


def central_land_area(label: str) -> float:
    """Land area (sq km) that makes E[density] * area equal the profile mean population."""
    lo, hi = _density_band(label)
    mean_density = (hi - lo) / math.log(hi / lo)
    return region_profile(label).mean_population / mean_density


def generate_synthetic_counties(
    profile: RegionType | str,
    count: int,
    seed: int,
    id_prefix: str | None = None,
) -> list[CountyRecord]:
    """Latin-hypercube draws calibrated to one region-type profile.

    Population density is log-uniform over the profile's min-max band and
    population = density * land area, so every record lands inside the band.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rt = region_type(profile)
    p = region_profile(rt)
    lo, hi = _density_band(rt.label)
    u = qmc.LatinHypercube(d=6, seed=np.random.default_rng(seed)).random(count)

    density = np.exp(np.log(lo) + u[:, 0] * (np.log(hi) - np.log(lo)))
    density = np.clip(density, lo, hi)
    area = central_land_area(rt.label) * (AREA_BAND[0] + u[:, 1] * (AREA_BAND[1] - AREA_BAND[0]))
    income = p.mean_household_income * (1 + INCOME_CV * norm.ppf(u[:, 2]))
    income = np.maximum(income, 0.3 * p.mean_household_income)
    demand = p.data_demand_gb_per_user_month * (DEMAND_BAND[0] + u[:, 3] * (DEMAND_BAND[1] - DEMAND_BAND[0]))
    growth = GROWTH_BAND[0] + u[:, 4] * (GROWTH_BAND[1] - GROWTH_BAND[0])
    cell_density = p.mean_cell_density * (CELL_DENSITY_BAND[0] + u[:, 5] * (CELL_DENSITY_BAND[1] - CELL_DENSITY_BAND[0]))

    prefix = id_prefix if id_prefix is not None else f"{rt.label}-{seed}"
    out = []
    for i in range(count):
        a = float(area[i])
        out.append(
            CountyRecord(
                fips_id=f"{prefix}-{i + 1:05d}",
                name=f"{rt.label} synthetic {i + 1}",
                population=float(density[i]) * a,
                pop_growth_rate=float(growth[i]),
                land_area_sqkm=a,
                median_household_income=float(income[i]),
                existing_cells=int(round(float(cell_density[i]) * a)),
                data_demand_gb_per_user_month=float(demand[i]),
            )
        )
    return out


def synthetic_dataset(seed: int = 2074, counts: dict[str, int] | None = None) -> CountyDataset:
    """All eight profiles at their published county counts (2074 total by default)."""
    records: list[CountyRecord] = []
    for i, label in enumerate(LABELS):
        n = counts[label] if counts is not None else region_profile(label).counties
        if n <= 0:
            continue
        records.extend(generate_synthetic_counties(label, n, seed + 1000 * i, id_prefix=f"S{i + 1}"))
    return CountyDataset.from_records(records)
