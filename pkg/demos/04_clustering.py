# %% [markdown]
# # Grouping counties into region types
#
# Counties are described by two densities: cells per square km and people
# per square km. k-means on z-scored features groups them. The elbow in
# within-cluster sum of squares and the Calinski-Harabasz score guide the
# choice of k. Here we use the bundled synthetic set of 2074 counties,
# drawn to match the eight region profiles.

# %%
from collections import Counter
from importlib import resources

from ranprocure.ingest import load_counties
from ranprocure.regions import LABELS, classify_by_centroid, county_features, diagnostics, kmeans_fit, label_clusters

path = resources.files("ranprocure") / "data" / "synthetic_counties_2074.csv"
ds = load_counties(path)
x = county_features(ds)
print(f"{len(ds)} counties, national household income {ds.national_household_income:,.0f} USD")

# %% [markdown]
# ## Elbow and Calinski-Harabasz

# %%
for k, wcss, ch in diagnostics(x, k_max=10):
    print(f"k={k:>2}  WCSS {wcss:9.2f}  CH {'' if ch is None else f'{ch:10.1f}'}")

# %% [markdown]
# ## Eight clusters, labelled by density
#
# Clusters are named from densest to sparsest. Raw densities are heavily
# skewed, so a few very dense counties take most of the clusters. Most
# rural counties collapse into one group. That is why region types are
# usually assigned by nearest published centroid in log-density space.
# The second column shows that assignment, which recovers the profile
# sizes the synthetic counties were drawn from.

# %%
fit = kmeans_fit(x, 8, seed=0)
names = label_clusters(fit.model)
by_cluster = Counter(names[i] for i in fit.assignment)
by_centroid = Counter(classify_by_centroid(c).label for c in ds)
print(f"{'label':<11}{'k-means':>9}{'centroid':>10}")
for label in LABELS:
    print(f"{label:<11}{by_cluster.get(label, 0):>9}{by_centroid.get(label, 0):>10}")
