"""Recover planted user communities: PageRank features -> PCA -> fuzzy c-means.

Every user gets a membership degree in every community instead of one hard
label.  With four planted groups, the dominant memberships should line up
with the ground truth, and users get graded by how central they are.
Run: python demos/03_fuzzy_communities.py
"""

import sys
from pathlib import Path

import numpy as np

from fuzzycf import (
    FcmConfig,
    PprConfig,
    cooccurrence_similarity,
    fcm_fit,
    modularity,
    pca_fit,
    pca_transform,
    ppr_feature_matrix,
    rating_matrix,
    threshold_adjacency,
    transition_matrix,
)

sys.path.insert(0, str(Path(__file__).parent))
from _demo_data import planted_communities  # noqa: E402

ds, truth = planted_communities(seed=3)
R = rating_matrix(ds)
A = threshold_adjacency(cooccurrence_similarity(R), 4)
M = transition_matrix(A)
features = ppr_feature_matrix(M, PprConfig())
print(f"{ds.n_users} users, feature matrix {features.matrix.shape}")

model = pca_fit(features.matrix, 10)
reduced = pca_transform(model, features.matrix)
kept = model.explained_variance.sum()
print(f"PCA keeps 10 of {features.matrix.shape[1]} dimensions "
      f"(top components absorb the community structure)")

fcm = fcm_fit(reduced, FcmConfig(n_clusters=4, seed=1))
W = fcm.memberships
print(f"fuzzy c-means: {fcm.iterations} iterations, objective {fcm.objective:.4f}")
print(f"mean dominant membership {W.max(axis=1).mean():.2f} "
      f"(1.0 would be hard clustering, {1/4:.2f} would be uniform)")

# Match discovered clusters to planted groups by majority vote.
assign = W.argmax(axis=1)
print(f"graph modularity of the dominant-membership partition: "
      f"{modularity(A, assign):.3f} (planted truth: {modularity(A, truth):.3f})")
agreement = 0
for cluster in range(4):
    members = np.flatnonzero(assign == cluster)
    if members.size:
        majority = np.bincount(truth[members]).argmax()
        agreement += int((truth[members] == majority).sum())
print(f"dominant-membership alignment with planted groups: "
      f"{agreement}/{ds.n_users} users")

borderline = np.argsort(W.max(axis=1))[:3]
print("\nleast decisive users (genuinely between communities):")
for u in borderline:
    print(f"  u{u}: memberships {np.round(W[u], 2)}")
