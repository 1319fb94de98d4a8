"""Region types, county clustering and centroid classification.

Counties are described by two features, existing cell density and
population density (both per sq km).  Clustering runs k-means on the
z-scored features; classification of single counties against the
published centroids works in log10 density space because the densities
span four orders of magnitude.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

LABELS = (
    "Urban",
    "Suburban1",
    "Suburban2",
    "Rural1",
    "Rural2",
    "Rural3",
    "Rural4",
    "Rural5",
)

URBAN_CLASS = "UrbanSuburban1"
RURAL_CLASS = "Suburban2RuralAll"
REGION_CLASSES = (URBAN_CLASS, RURAL_CLASS)

DENSITY_FLOOR = 1e-4


@dataclass(frozen=True)
class RegionType:
    label: str
    centroid_cell_density: float
    centroid_pop_density: float

    @property
    def region_class(self) -> str:
        return region_class(self.label)

    @property
    def rank(self) -> int:
        return LABELS.index(self.label)


REGION_TYPES = (
    RegionType("Urban", 15.46, 6185.54),
    RegionType("Suburban1", 1.09, 799.39),
    RegionType("Suburban2", 0.20, 208.56),
    RegionType("Rural1", 0.09, 77.73),
    RegionType("Rural2", 0.05, 32.89),
    RegionType("Rural3", 0.03, 15.66),
    RegionType("Rural4", 0.01, 6.77),
    RegionType("Rural5", 0.01, 1.45),
)


@dataclass(frozen=True)
class RegionProfile:
    """Per-region-type county summary used to calibrate synthetic data."""

    label: str
    counties: int
    mean_population: float
    mean_household_income: float
    data_demand_gb_per_user_month: float
    mean_cell_density: float
    pop_density_min: float
    pop_density_max: float
    pop_density_mean: float


REGION_PROFILES = {
    p.label: p
    for p in (
        RegionProfile("Urban", 13, 762_000, 85_000, 168, 21.191, 2760, 27469, 7899),
        RegionProfile("Suburban1", 117, 637_000, 78_000, 96, 1.361, 391, 3190, 893),
        RegionProfile("Suburban2", 240, 258_000, 76_000, 36, 0.215, 126, 445, 222),
        RegionProfile("Rural1", 334, 91_000, 65_000, 10, 0.091, 51, 128, 80),
        RegionProfile("Rural2", 466, 44_000, 59_000, 6, 0.052, 23, 50, 34),
        RegionProfile("Rural3", 441, 23_000, 55_000, 3, 0.025, 10, 23, 16),
        RegionProfile("Rural4", 279, 15_000, 55_000, 2, 0.014, 3, 10, 7),
        RegionProfile("Rural5", 184, 8_000, 57_000, 1, 0.005, 0, 3, 2),
    )
}


def region_type(label: str | RegionType) -> RegionType:
    if isinstance(label, RegionType):
        return label
    key = str(label).replace(" ", "")
    for rt in REGION_TYPES:
        if rt.label.lower() == key.lower():
            return rt
    raise KeyError(f"unknown region type {label!r}")


def region_profile(label: str | RegionType) -> RegionProfile:
    return REGION_PROFILES[region_type(label).label]


def region_class(label: str) -> str:
    """Price/configuration tier: Urban and Suburban1 vs everything else."""
    label = region_type(label).label
    return URBAN_CLASS if label in ("Urban", "Suburban1") else RURAL_CLASS


# -- centroid classification -------------------------------------------------


def _log_point(cell_density: float, pop_density: float) -> tuple[float, float]:
    return (
        math.log10(max(cell_density, DENSITY_FLOOR)),
        math.log10(max(pop_density, DENSITY_FLOOR)),
    )


_CENTROID_LOGS = [_log_point(rt.centroid_cell_density, rt.centroid_pop_density) for rt in REGION_TYPES]


def classify_densities(cell_density: float, pop_density: float) -> RegionType:
    x, y = _log_point(cell_density, pop_density)
    best, best_d = REGION_TYPES[0], math.inf
    # REGION_TYPES is densest first, so strict < keeps ties on the denser label
    for rt, (cx, cy) in zip(REGION_TYPES, _CENTROID_LOGS):
        d = (x - cx) ** 2 + (y - cy) ** 2
        if d < best_d:
            best, best_d = rt, d
    return best


def classify_by_centroid(county) -> RegionType:
    """Nearest published centroid for a county record (log10 density space)."""
    return classify_densities(county.cell_density, county.pop_density)


# -- standardization ----------------------------------------------------------


def zscore_standardize(points) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(z, means, stds)`` using the population (ddof=0) std."""
    x = np.asarray(points, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("need at least 2 points to standardize")
    means = x.mean(axis=0)
    stds = x.std(axis=0)
    for j, s in enumerate(stds):
        if not s > 0:
            raise ValueError(f"feature {j} has zero variance")
    return (x - means) / stds, means, stds


def apply_standardization(points, means, stds) -> np.ndarray:
    return (np.asarray(points, dtype=float) - np.asarray(means)) / np.asarray(stds)


# -- k-means -------------------------------------------------------------------


@dataclass(frozen=True)
class ClusteringModel:
    k: int
    feature_means: tuple[float, ...]
    feature_stds: tuple[float, ...]
    centroids: tuple[tuple[float, ...], ...]
    seed: int

    def raw_centroids(self) -> np.ndarray:
        return np.asarray(self.centroids) * np.asarray(self.feature_stds) + np.asarray(self.feature_means)

    def predict(self, points) -> np.ndarray:
        z = apply_standardization(points, self.feature_means, self.feature_stds)
        return _assign(z, np.asarray(self.centroids))[0]

    def to_json(self) -> str:
        return json.dumps(
            {
                "k": self.k,
                "feature_means": list(self.feature_means),
                "feature_stds": list(self.feature_stds),
                "centroids": [list(c) for c in self.centroids],
                "seed": self.seed,
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "ClusteringModel":
        d = json.loads(text)
        return cls(
            k=int(d["k"]),
            feature_means=tuple(d["feature_means"]),
            feature_stds=tuple(d["feature_stds"]),
            centroids=tuple(tuple(c) for c in d["centroids"]),
            seed=int(d["seed"]),
        )


@dataclass(frozen=True)
class KMeansResult:
    model: ClusteringModel
    assignment: np.ndarray
    wcss: float
    n_iter: int
    wcss_history: tuple[float, ...] = field(default=())


def _assign(z: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d2 = ((z[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    labels = d2.argmin(axis=1)
    return labels, d2[np.arange(len(z)), labels]


def _wcss(z: np.ndarray, centers: np.ndarray, labels: np.ndarray) -> float:
    return float(((z - centers[labels]) ** 2).sum())


def _kmeanspp(z: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = len(z)
    centers = [z[rng.integers(n)]]
    d2 = ((z - centers[0]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = d2.sum()
        if total <= 0:
            break
        idx = rng.choice(n, p=d2 / total)
        centers.append(z[idx])
        d2 = np.minimum(d2, ((z - z[idx]) ** 2).sum(axis=1))
    return np.array(centers)


def _lloyd(z: np.ndarray, centers: np.ndarray, max_iters: int):
    k = len(centers)
    centers = centers.copy()
    labels, _ = _assign(z, centers)
    history = [_wcss(z, centers, labels)]
    n_iter = 0
    for n_iter in range(1, max_iters + 1):
        new_centers = centers.copy()
        for j in range(k):
            members = labels == j
            if members.any():
                new_centers[j] = z[members].mean(axis=0)
        new_labels, d2 = _assign(z, new_centers)
        # reseed empty clusters at the point farthest from its centroid
        for j in range(k):
            if not (new_labels == j).any():
                far = int(d2.argmax())
                new_centers[j] = z[far]
                new_labels, d2 = _assign(z, new_centers)
        centers = new_centers
        history.append(_wcss(z, centers, new_labels))
        if np.array_equal(new_labels, labels):
            labels = new_labels
            break
        labels = new_labels
    return centers, labels, n_iter, history


def _n_distinct(x: np.ndarray) -> int:
    return len(np.unique(x, axis=0))


def kmeans_fit(
    points,
    k: int,
    seed: int = 0,
    max_iters: int = 300,
    init_centers=None,
) -> KMeansResult:
    """Lloyd's algorithm from k-means++ seeding on z-scored features.

    Converges when the assignment vector repeats or ``max_iters`` is hit.
    ``init_centers`` (standardized units) bypasses the k-means++ draw.
    """
    x = np.asarray(points, dtype=float)
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > _n_distinct(x):
        raise ValueError(f"k={k} exceeds the number of distinct points ({_n_distinct(x)})")
    z, means, stds = zscore_standardize(x)
    rng = np.random.default_rng(seed)
    if init_centers is None:
        centers = _kmeanspp(z, k, rng)
    else:
        centers = np.asarray(init_centers, dtype=float)
        if centers.shape != (k, z.shape[1]):
            raise ValueError("init_centers has the wrong shape")
    centers, labels, n_iter, history = _lloyd(z, centers, max_iters)
    model = ClusteringModel(
        k=k,
        feature_means=tuple(float(v) for v in means),
        feature_stds=tuple(float(v) for v in stds),
        centroids=tuple(tuple(float(v) for v in c) for c in centers),
        seed=seed,
    )
    return KMeansResult(model, labels, history[-1], n_iter, tuple(history))


def kmeans_best_of(points, k: int, seed: int = 0, restarts: int = 5, max_iters: int = 300, init_centers=None) -> KMeansResult:
    """Lowest-WCSS fit over ``restarts`` seeded runs (plus an optional warm start)."""
    best = None
    for r in range(restarts):
        res = kmeans_fit(points, k, seed=seed + r, max_iters=max_iters)
        if best is None or res.wcss < best.wcss:
            best = res
    if init_centers is not None:
        res = kmeans_fit(points, k, seed=seed, max_iters=max_iters, init_centers=init_centers)
        if res.wcss < best.wcss:
            best = res
    return best


def _fits_by_k(points, k_max: int, seed: int, restarts: int) -> list[KMeansResult]:
    x = np.asarray(points, dtype=float)
    k_max = min(k_max, _n_distinct(x))
    fits: list[KMeansResult] = []
    z = None
    for k in range(1, k_max + 1):
        warm = None
        if fits:
            # previous optimum plus its worst-served point: Lloyd from here
            # cannot end above the k-1 WCSS
            prev = fits[-1]
            if z is None:
                z = apply_standardization(x, prev.model.feature_means, prev.model.feature_stds)
            c = np.asarray(prev.model.centroids)
            _, d2 = _assign(z, c)
            warm = np.vstack([c, z[int(d2.argmax())]])
        fits.append(kmeans_best_of(x, k, seed=seed, restarts=restarts, init_centers=warm))
    return fits


def wcss_curve(points, k_max: int, seed: int = 0, restarts: int = 5) -> list[tuple[int, float]]:
    """Elbow diagnostic: best-of-restarts WCSS for k = 1..k_max."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    return [(f.model.k, f.wcss) for f in _fits_by_k(points, k_max, seed, restarts)]


def diagnostics(points, k_max: int = 10, seed: int = 0, restarts: int = 5) -> list[tuple[int, float, float | None]]:
    """``(k, wcss, calinski_harabasz)`` rows; CH is ``None`` for k = 1."""
    x = np.asarray(points, dtype=float)
    rows = []
    for f in _fits_by_k(x, k_max, seed, restarts):
        ch = None
        if f.model.k >= 2 and len(x) > f.model.k:
            z = apply_standardization(x, f.model.feature_means, f.model.feature_stds)
            ch = calinski_harabasz(z, f.assignment)
        rows.append((f.model.k, f.wcss, ch))
    return rows


def calinski_harabasz(points, assignment) -> float:
    """(SSB / (k-1)) / (SSW / (n-k)).

    Returns ``math.inf`` when clusters are perfectly tight (SSW = 0) but
    separated, and 0 when there is no between-cluster dispersion.
    """
    x = np.asarray(points, dtype=float)
    a = np.asarray(assignment)
    n = len(x)
    ids = np.unique(a)
    k = len(ids)
    if k < 2:
        raise ValueError("need at least 2 non-empty clusters")
    if n <= k:
        raise ValueError("need more points than clusters")
    mean = x.mean(axis=0)
    ssb = 0.0
    ssw = 0.0
    for c in ids:
        members = x[a == c]
        cm = members.mean(axis=0)
        ssb += len(members) * float(((cm - mean) ** 2).sum())
        ssw += float(((members - cm) ** 2).sum())
    if ssb == 0:
        return 0.0
    if ssw == 0:
        return math.inf
    return (ssb / (k - 1)) / (ssw / (n - k))


def label_clusters(model: ClusteringModel) -> list[str]:
    """Name clusters by decreasing raw population-density centroid.

    With k = 8 the region-type labels are used; otherwise ``C1..Ck``.
    Returned list is indexed by cluster id.
    """
    raw = model.raw_centroids()
    order = sorted(range(model.k), key=lambda j: (-raw[j, 1], -raw[j, 0], j))
    names = LABELS if model.k == len(LABELS) else [f"C{i + 1}" for i in range(model.k)]
    out = [""] * model.k
    for rank, j in enumerate(order):
        out[j] = names[rank]
    return out


def county_features(counties: Iterable) -> np.ndarray:
    """(cell_density, pop_density) matrix for county records."""
    return np.array([[c.cell_density, c.pop_density] for c in counties], dtype=float)


def write_assignment_csv(path, fips_ids: Sequence[str], labels: Sequence[str]) -> None:
    import csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["fips_id", "label"])
        for f, lab in zip(fips_ids, labels):
            w.writerow([f, lab])
