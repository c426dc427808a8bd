"""Fuzzy c-means clustering of users in the reduced feature space."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FcmConfig:
    """Cluster count, fuzziness exponent, and stopping rule for one fit."""

    n_clusters: int
    fuzziness: float = 2.0
    tol: float = 1e-6
    max_iter: int = 300
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_clusters < 2:
            raise ValueError(f"n_clusters must be >= 2, got {self.n_clusters}")
        if not self.fuzziness > 1.0:
            raise ValueError(f"fuzziness must be > 1, got {self.fuzziness}")
        if self.tol <= 0.0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")


@dataclass(frozen=True)
class FcmModel:
    """Fitted centroids and the row-stochastic membership matrix."""

    centroids: np.ndarray
    memberships: np.ndarray
    objective: float
    iterations: int
    converged: bool
    objective_history: np.ndarray

    @property
    def n_clusters(self) -> int:
        return self.centroids.shape[0]


def _squared_distances(X: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """Pairwise squared Euclidean distances, clipped against tiny negatives."""
    d2 = (
        (X * X).sum(axis=1)[:, None]
        - 2.0 * (X @ centroids.T)
        + (centroids * centroids).sum(axis=1)[None, :]
    )
    return np.clip(d2, 0.0, None)


def _memberships(d2: np.ndarray, fuzziness: float) -> np.ndarray:
    """Membership rows from squared distances; rows always sum to exactly 1.

    Points coinciding with one or more centroids split their mass uniformly
    over the coincident centroids.  Distances are scaled by the row minimum
    before exponentiation so extreme distance ratios cannot overflow.
    """
    n, c = d2.shape
    w = np.zeros((n, c))
    dmin = d2.min(axis=1, keepdims=True)
    at_centroid = dmin[:, 0] == 0.0
    if np.any(at_centroid):
        zeros = d2[at_centroid] == 0.0
        w[at_centroid] = zeros / zeros.sum(axis=1, keepdims=True)
    regular = ~at_centroid
    if np.any(regular):
        scaled = d2[regular] / dmin[regular]
        t = scaled ** (-1.0 / (fuzziness - 1.0))
        w[regular] = t / t.sum(axis=1, keepdims=True)
    return w


def _centroids(X: np.ndarray, w: np.ndarray, fuzziness: float, previous: np.ndarray) -> np.ndarray:
    """Fuzzy-weighted centroid update; empty clusters keep their old center."""
    wm = w**fuzziness
    weight = wm.sum(axis=0)
    out = previous.copy()
    nonempty = weight > 0.0
    out[nonempty] = (wm.T[nonempty] @ X) / weight[nonempty, None]
    return out


def _objective(d2: np.ndarray, w: np.ndarray, fuzziness: float) -> float:
    return float(((w**fuzziness) * d2).sum())


def membership_of(centroids: np.ndarray, x: np.ndarray, fuzziness: float) -> np.ndarray:
    """Membership degrees of one point against a fixed set of centroids."""
    centroids = np.asarray(centroids, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if centroids.ndim != 2 or centroids.shape[0] < 1:
        raise ValueError("centroids must be a non-empty 2-D array")
    if not fuzziness > 1.0:
        raise ValueError(f"fuzziness must be > 1, got {fuzziness}")
    diff = centroids - x[None, :]
    d2 = (diff * diff).sum(axis=1)[None, :]
    return _memberships(d2, fuzziness)[0]


def fcm_fit(
    X: np.ndarray, cfg: FcmConfig, init_centroids: np.ndarray | None = None
) -> FcmModel:
    """Alternate membership and centroid updates until the objective settles.

    Initial centroids are ``cfg.n_clusters`` distinct rows of ``X`` sampled
    with ``cfg.seed`` unless ``init_centroids`` is given.  Iteration stops
    when the objective changes by less than ``cfg.tol``; the returned
    memberships are recomputed from the final centroids so the pair is
    mutually consistent.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"X must be 2-D, got shape {X.shape}")
    n = X.shape[0]
    if n < cfg.n_clusters:
        raise ValueError(f"need at least {cfg.n_clusters} points, got {n}")
    if not np.all(np.isfinite(X)):
        raise ValueError("X contains non-finite values")

    if init_centroids is not None:
        centroids = np.array(init_centroids, dtype=np.float64)
        if centroids.shape != (cfg.n_clusters, X.shape[1]):
            raise ValueError(
                f"init_centroids must have shape {(cfg.n_clusters, X.shape[1])}, "
                f"got {centroids.shape}"
            )
    else:
        rng = np.random.default_rng(cfg.seed)
        centroids = X[rng.choice(n, size=cfg.n_clusters, replace=False)].copy()

    history: list[float] = []
    previous_objective = None
    converged = False
    iterations = 0
    for iterations in range(1, cfg.max_iter + 1):
        w = _memberships(_squared_distances(X, centroids), cfg.fuzziness)
        centroids = _centroids(X, w, cfg.fuzziness, centroids)
        objective = _objective(_squared_distances(X, centroids), w, cfg.fuzziness)
        history.append(objective)
        if previous_objective is not None and abs(previous_objective - objective) < cfg.tol:
            converged = True
            break
        previous_objective = objective

    # Final membership refresh against the last centroids.
    d2 = _squared_distances(X, centroids)
    w = _memberships(d2, cfg.fuzziness)
    objective = _objective(d2, w, cfg.fuzziness)
    history.append(objective)
    return FcmModel(centroids, w, objective, iterations, converged, np.asarray(history))
