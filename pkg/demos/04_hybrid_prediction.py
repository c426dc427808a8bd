"""How one rating gets predicted: correlation, community overlap, and the blend.

The weight of a neighbor is alpha * (shared-community membership product)
plus beta * (Pearson correlation); the prediction is the weighted mean of
the neighbors' ratings on the target item.
Run: python demos/04_hybrid_prediction.py
"""

import numpy as np

from fuzzycf import (
    MixConfig,
    RatingsDataset,
    RatingTriple,
    community_similarity,
    hybrid_weight,
    pearson,
    predict_rating,
    rating_matrix,
)

rows = {
    "ana":  {"dune": 5, "solaris": 4, "arrival": 5, "heat": 2},
    "bo":   {"dune": 4, "solaris": 4, "arrival": 5, "blade": 4},
    "cy":   {"dune": 2, "solaris": 1, "heat": 5, "blade": 3},
    "di":   {"solaris": 5, "arrival": 4, "heat": 1, "blade": 5},
}
triples = [
    RatingTriple(u, i, float(r)) for u, items in rows.items() for i, r in items.items()
]
ds = RatingsDataset.from_triples(triples, 1.0, 5.0)
R = rating_matrix(ds)

# Fuzzy memberships: ana/bo/di lean toward community 0, cy toward community 1.
W = np.array([
    [0.90, 0.10],
    [0.80, 0.20],
    [0.15, 0.85],
    [0.70, 0.30],
])

ana = ds.user_index["ana"]
print("ana's view of the others:")
print(f"{'user':>6} {'pearson':>9} {'community':>10} {'blend a=0.4':>12}")
cfg = MixConfig(alpha=0.4, beta=1.0, theta=0.1)
for name in ("bo", "cy", "di"):
    k = ds.user_index[name]
    cor = pearson(R, ana, k)
    comm = community_similarity(W, ana, k, cfg.theta)
    print(f"{name:>6} {cor:9.3f} {comm:10.3f} {hybrid_weight(cfg, comm, cor):12.3f}")

target = ds.item_index["blade"]
print("\npredicting ana's rating for 'blade' (rated by bo=4, cy=3, di=5):")
for alpha, label in ((0.0, "correlation only"), (0.4, "blended"), (5.0, "community heavy")):
    result = predict_rating(ana, target, R, W, MixConfig(alpha=alpha, beta=1.0, theta=0.1))
    print(f"  alpha={alpha:3.1f} ({label:17s}): {result.value:.3f} "
          f"from {result.neighbor_count} neighbors")

print("\nnegative-correlation neighbors are excluded rather than subtracted,")
print("so predictions always stay inside the rating scale.")
