"""User co-rating graph: similarity counts, thresholded adjacency, transitions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .datasets import RatingMatrix


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric co-rating counts between users; diagonal fixed at zero."""

    counts: sparse.csr_matrix

    @property
    def n_users(self) -> int:
        return self.counts.shape[0]


@dataclass(frozen=True)
class AdjacencyMatrix:
    """Binary symmetric user graph obtained by thresholding similarity counts."""

    matrix: sparse.csr_matrix
    tau: int

    @property
    def n_users(self) -> int:
        return self.matrix.shape[0]

    def degrees(self) -> np.ndarray:
        return np.asarray(self.matrix.sum(axis=1)).ravel().astype(np.int64)

    def edge_list(self) -> list[tuple[int, int]]:
        """All directed (i, j) pairs, dense indices; symmetric by construction."""
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return [(int(coo.row[k]), int(coo.col[k])) for k in order]


@dataclass(frozen=True)
class TransitionMatrix:
    """Column-stochastic random-walk matrix; isolated users give zero columns."""

    matrix: sparse.csc_matrix
    out_degree: np.ndarray
    dead_ends: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def cooccurrence_similarity(R: RatingMatrix) -> SimilarityMatrix:
    """Count co-rated items for every user pair.

    Computed as B @ B.T on the binary rated-indicator matrix, which
    accumulates rater pairs item by item and stays cheap for sparse R.
    """
    indicator = R.matrix.copy()
    indicator.data = np.ones_like(indicator.data, dtype=np.int64)
    counts = (indicator @ indicator.T).tocsr()
    counts.setdiag(0)
    counts.eliminate_zeros()
    counts.sort_indices()
    return SimilarityMatrix(counts)


def threshold_adjacency(S: SimilarityMatrix, tau: int) -> AdjacencyMatrix:
    """Link users i and j exactly when their co-rating count is strictly > tau."""
    if tau < 0:
        raise ValueError(f"tau must be a nonnegative integer, got {tau}")
    coo = S.counts.tocoo()
    keep = coo.data > tau
    mat = sparse.csr_matrix(
        (np.ones(int(keep.sum()), dtype=np.int8), (coo.row[keep], coo.col[keep])),
        shape=S.counts.shape,
    )
    mat.sort_indices()
    return AdjacencyMatrix(mat, int(tau))


def modularity(A: AdjacencyMatrix, labels: np.ndarray) -> float:
    """Newman modularity of a hard node partition of the user graph.

    Diagnostic only: useful for judging whether a similarity threshold
    produces better-than-chance community structure (e.g. on the dominant
    fuzzy memberships); nothing in the pipeline selects on it.
    """
    labels = np.asarray(labels)
    if labels.shape != (A.n_users,):
        raise ValueError(
            f"labels must have shape ({A.n_users},), got {labels.shape}"
        )
    degrees = A.degrees().astype(np.float64)
    two_m = degrees.sum()
    if two_m == 0.0:
        return 0.0
    coo = A.matrix.tocoo()
    within = labels[coo.row] == labels[coo.col]
    edge_fraction = float(coo.data[within].sum()) / two_m
    _, dense_labels = np.unique(labels, return_inverse=True)
    community_degree = np.bincount(dense_labels, weights=degrees)
    expected_fraction = float(((community_degree / two_m) ** 2).sum())
    return edge_fraction - expected_fraction


def transition_matrix(A: AdjacencyMatrix) -> TransitionMatrix:
    """Column-normalize the adjacency matrix into random-walk transitions.

    Columns of degree-0 (isolated) users are left all-zero and reported as
    dead ends; the walk compensates for their leaked mass at iteration time.
    """
    degree = np.asarray(A.matrix.sum(axis=0)).ravel().astype(np.int64)
    mat = A.matrix.astype(np.float64).tocsc()
    col_of_entry = np.repeat(np.arange(mat.shape[1]), np.diff(mat.indptr))
    with np.errstate(divide="ignore"):
        inv_degree = np.where(degree > 0, 1.0 / np.maximum(degree, 1), 0.0)
    mat.data *= inv_degree[col_of_entry]
    dead_ends = np.flatnonzero(degree == 0)
    return TransitionMatrix(mat, degree, dead_ends)
