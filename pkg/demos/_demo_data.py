"""Small data builders shared by the demo scripts."""

import numpy as np
from scipy import sparse

from fuzzycf import RatingsDataset, RatingTriple
from fuzzycf.graph import AdjacencyMatrix


def adjacency_from_edges(n: int, edges) -> AdjacencyMatrix:
    rows, cols = [], []
    for i, j in edges:
        rows += [i, j]
        cols += [j, i]
    mat = sparse.csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    mat.sum_duplicates()
    mat.data = np.ones_like(mat.data)
    return AdjacencyMatrix(mat, 0)


def planted_communities(
    n_users=150, n_items=180, n_groups=4, per_user=32, seed=0
) -> tuple[RatingsDataset, np.ndarray]:
    """Ratings with planted taste groups; returns (dataset, true group labels).

    Each group favors its own slice of the catalogue and shifts the scores
    it gives, so both who-rated-what and the ratings themselves carry the
    group signal.
    """
    rng = np.random.default_rng(seed)
    group = rng.integers(n_groups, size=n_users)
    item_group = rng.integers(n_groups, size=n_items)
    item_base = rng.uniform(2.0, 4.0, size=n_items)
    group_offset = rng.normal(0, 1.2, size=(n_groups, n_items))
    triples = []
    for u in range(n_users):
        own = np.flatnonzero(item_group == group[u])
        other = np.flatnonzero(item_group != group[u])
        n_own = min(int(round(per_user * 0.85)), own.size)
        items = np.concatenate([
            rng.choice(own, size=n_own, replace=False),
            rng.choice(other, size=per_user - n_own, replace=False),
        ])
        values = np.clip(
            np.rint(item_base[items] + group_offset[group[u], items]
                    + rng.normal(0, 0.5, size=items.size)),
            1, 5,
        )
        triples.extend(
            RatingTriple(f"u{u}", f"i{i}", float(r)) for i, r in zip(items, values)
        )
    return RatingsDataset.from_triples(triples, 1.0, 5.0), group


def write_movielens_format(ds: RatingsDataset, path) -> None:
    lines = [f"{t.user}\t{t.item}\t{int(t.rating)}\t0" for t in ds.triples]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
