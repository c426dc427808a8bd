"""Shared fixtures: synthetic datasets, random graphs, dataset discovery."""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np
import pytest

from fuzzycf.datasets import RatingsDataset, RatingTriple
from fuzzycf.graph import (
    AdjacencyMatrix,
    TransitionMatrix,
    cooccurrence_similarity,
    threshold_adjacency,
    transition_matrix,
)

REPO_ROOT = Path(__file__).resolve().parents[1]


def make_dataset(records, scale=(1.0, 5.0)) -> RatingsDataset:
    """Dataset from (user, item, rating) tuples; ids coerced to strings."""
    triples = [RatingTriple(str(u), str(i), float(r)) for u, i, r in records]
    return RatingsDataset.from_triples(triples, scale[0], scale[1])


def random_dataset(
    n_users: int, n_items: int, density: float, seed: int, scale=(1.0, 5.0)
) -> RatingsDataset:
    """Random integer-rated dataset; every user rates at least one item."""
    rng = np.random.default_rng(seed)
    records = []
    lo, hi = int(scale[0]), int(scale[1])
    for u in range(n_users):
        n_rated = max(1, rng.binomial(n_items, density))
        items = rng.choice(n_items, size=n_rated, replace=False)
        for i in items:
            records.append((f"u{u}", f"i{i}", float(rng.integers(lo, hi + 1))))
    return make_dataset(records, scale)


def adjacency_from_edges(n: int, edges, tau: int = 0) -> AdjacencyMatrix:
    """Adjacency for an undirected edge list on n nodes."""
    from scipy import sparse

    rows, cols = [], []
    for i, j in edges:
        rows += [i, j]
        cols += [j, i]
    mat = sparse.csr_matrix(
        (np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n)
    )
    mat.sum_duplicates()
    mat.data = np.ones_like(mat.data)
    return AdjacencyMatrix(mat, tau)


def random_transition(
    n: int, rng: np.random.Generator, edge_prob: float = 0.35, allow_isolated: bool = False
) -> TransitionMatrix:
    """Transition matrix of a random undirected graph.

    Unless ``allow_isolated``, every node is wired to at least one neighbor
    so the graph has no dead ends.
    """
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < edge_prob:
                edges.add((i, j))
    if not allow_isolated:
        for i in range(n):
            if not any(i in e for e in edges):
                j = int(rng.integers(n - 1))
                j = j if j < i else j + 1
                edges.add((min(i, j), max(i, j)))
    return transition_matrix(adjacency_from_edges(n, edges))


def pipeline_matrices(ds, tau=0):
    """Similarity, adjacency, transition for a dataset's training matrix."""
    from fuzzycf.datasets import rating_matrix

    R = rating_matrix(ds)
    S = cooccurrence_similarity(R)
    A = threshold_adjacency(S, tau)
    return R, S, A, transition_matrix(A)


def planted_communities_dataset(
    n_users=120,
    n_items=150,
    n_groups=4,
    per_user=30,
    seed=0,
    pool_focus=0.85,
    offset_scale=1.2,
    noise=0.5,
) -> RatingsDataset:
    """Ratings with planted taste groups that show up in co-rating choices.

    Each user mostly rates items from their group's pool, and their group
    shifts the rating values, so co-rating structure genuinely predicts
    rating agreement.
    """
    rng = np.random.default_rng(seed)
    group = rng.integers(n_groups, size=n_users)
    item_group = rng.integers(n_groups, size=n_items)
    item_base = rng.uniform(2.0, 4.0, size=n_items)
    group_offset = rng.normal(0, offset_scale, size=(n_groups, n_items))
    records = []
    for u in range(n_users):
        own = np.flatnonzero(item_group == group[u])
        other = np.flatnonzero(item_group != group[u])
        n_own = min(int(round(per_user * pool_focus)), own.size)
        items = np.concatenate([
            rng.choice(own, size=n_own, replace=False),
            rng.choice(other, size=per_user - n_own, replace=False),
        ])
        values = np.clip(
            np.rint(
                item_base[items]
                + group_offset[group[u], items]
                + rng.normal(0, noise, size=items.size)
            ),
            1,
            5,
        )
        records.extend((f"u{u}", f"i{i}", float(r)) for i, r in zip(items, values))
    return make_dataset(records)


def ml100k_path() -> Path | None:
    """Locate the real ML-100K ratings file, if present."""
    env = os.environ.get("ML100K_PATH")
    candidates = [Path(env)] if env else []
    candidates += [
        REPO_ROOT / "data" / "ml-100k" / "u.data",
        REPO_ROOT / "data" / "u.data",
    ]
    for path in candidates:
        if path.is_file():
            return path
    return None


def filmtrust_path() -> Path | None:
    """Locate the real FilmTrust ratings file, if present."""
    env = os.environ.get("FILMTRUST_PATH")
    candidates = [Path(env)] if env else []
    candidates += [
        REPO_ROOT / "data" / "filmtrust" / "ratings.txt",
        REPO_ROOT / "data" / "ratings.txt",
    ]
    for path in candidates:
        if path.is_file():
            return path
    return None


requires_ml100k = pytest.mark.skipif(
    ml100k_path() is None,
    reason="ML-100K ratings file not found (set ML100K_PATH or place data/ml-100k/u.data)",
)

requires_filmtrust = pytest.mark.skipif(
    filmtrust_path() is None,
    reason="FilmTrust ratings file not found (set FILMTRUST_PATH or place data/filmtrust/ratings.txt)",
)
