"""Build the user network from ratings: co-rating counts -> threshold -> walk.

Two users are linked when they rated strictly more than `tau` common items;
the adjacency is then column-normalized into a random-walk transition matrix.
Run: python demos/01_user_graph.py
"""

import numpy as np

from fuzzycf import (
    RatingsDataset,
    RatingTriple,
    cooccurrence_similarity,
    rating_matrix,
    threshold_adjacency,
    transition_matrix,
)

# Three heavy readers and one newcomer rating a small catalogue.
records = [
    ("ana", ["dune", "solaris", "arrival", "alien"], [5, 4, 5, 3]),
    ("bo", ["dune", "solaris", "arrival", "heat"], [4, 4, 5, 2]),
    ("cy", ["dune", "heat", "ronin", "alien"], [2, 5, 4, 1]),
    ("di", ["ronin"], [4]),
]
triples = [
    RatingTriple(user, item, float(score))
    for user, items, scores in records
    for item, score in zip(items, scores)
]
ds = RatingsDataset.from_triples(triples, 1.0, 5.0)
R = rating_matrix(ds)
print(f"{ds.n_users} users x {ds.n_items} items, {len(ds)} ratings")

S = cooccurrence_similarity(R)
print("\nco-rating counts (users in index order", list(ds.user_index), "):")
print(S.counts.toarray())

for tau in (0, 1, 2):
    A = threshold_adjacency(S, tau)
    print(f"\ntau={tau}: {A.matrix.nnz // 2} undirected edges, degrees {A.degrees()}")

A = threshold_adjacency(S, 1)
M = transition_matrix(A)
print("\ntransition matrix at tau=1 (columns sum to 1, dead ends all-zero):")
print(np.round(M.matrix.toarray(), 3))
print("dead ends:", M.dead_ends, "->", [list(ds.user_index)[i] for i in M.dead_ends])
