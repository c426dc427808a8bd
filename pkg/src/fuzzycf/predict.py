"""Hybrid rating prediction from community overlap and rating correlation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datasets import RatingMatrix

FALLBACK_NONE = "none"
FALLBACK_USER_MEAN = "user_mean"
FALLBACK_GLOBAL_MEAN = "global_mean"

# Below this many co-rated items, Pearson correlation is pure noise.
DEFAULT_MIN_OVERLAP = 2


@dataclass(frozen=True)
class MixConfig:
    """Weights for blending community similarity with rating correlation.

    The prediction is a weighted mean, so only the ratio gamma = alpha/beta
    matters; the conventional parameterization fixes beta at 1 and sweeps
    gamma.  ``theta`` is the membership level both users must exceed for a
    cluster to count as shared.
    """

    alpha: float
    beta: float = 1.0
    theta: float = 0.1

    def __post_init__(self) -> None:
        if self.alpha < 0.0 or self.beta < 0.0:
            raise ValueError("alpha and beta must be nonnegative")
        if self.alpha + self.beta <= 0.0:
            raise ValueError("alpha + beta must be positive")
        if not 0.0 <= self.theta < 1.0:
            raise ValueError(f"theta must be in [0, 1), got {self.theta}")

    @property
    def gamma(self) -> float:
        return self.alpha / self.beta if self.beta > 0.0 else float("inf")

    @classmethod
    def from_gamma(cls, gamma: float, theta: float = 0.1) -> "MixConfig":
        return cls(alpha=gamma, beta=1.0, theta=theta)


@dataclass(frozen=True)
class PredictionResult:
    """Predicted rating, contributing neighbor count, and fallback taken."""

    value: float
    neighbor_count: int
    fallback: str


def pearson(
    R: RatingMatrix, u_a: int, u_b: int, min_overlap: int = DEFAULT_MIN_OVERLAP
) -> float:
    """Pearson correlation over the co-rated items of two users.

    Ratings are centered by each user's overall mean (not the co-rated
    subset mean).  Returns 0 when fewer than ``min_overlap`` items are
    shared or either centered vector has zero norm.
    """
    _check_user(R, u_a)
    _check_user(R, u_b)
    row_a = R.matrix.getrow(u_a)
    row_b = R.matrix.getrow(u_b)
    common, idx_a, idx_b = np.intersect1d(
        row_a.indices, row_b.indices, assume_unique=True, return_indices=True
    )
    if common.size < min_overlap:
        return 0.0
    dev_a = row_a.data[idx_a] - R.user_means[u_a]
    dev_b = row_b.data[idx_b] - R.user_means[u_b]
    denom = np.sqrt((dev_a**2).sum() * (dev_b**2).sum())
    if denom == 0.0:
        return 0.0
    return float(np.clip((dev_a * dev_b).sum() / denom, -1.0, 1.0))


def pearson_matrix(R: RatingMatrix, min_overlap: int = DEFAULT_MIN_OVERLAP) -> np.ndarray:
    """All-pairs Pearson correlations, assembled from sparse matrix products.

    Entry [a, b] equals ``pearson(R, a, b)`` up to floating-point summation
    order.  Dense m x m output, fine at desk scale.
    """
    ratings = R.matrix.astype(np.float64)
    indicator = ratings.copy()
    indicator.data = np.ones_like(indicator.data)
    mu = R.user_means

    cross = (ratings @ ratings.T).toarray()  # sum of r_a * r_b over co-rated items
    own = (ratings @ indicator.T).toarray()  # own[a, b] = sum of a's ratings on co-rated items
    counts = (indicator @ indicator.T).toarray()
    own_sq = (ratings.multiply(ratings) @ indicator.T).toarray()

    num = cross - mu[:, None] * own.T - mu[None, :] * own + counts * np.outer(mu, mu)
    dev_a = np.clip(own_sq - 2.0 * mu[:, None] * own + counts * (mu**2)[:, None], 0.0, None)
    denom = np.sqrt(dev_a * dev_a.T)
    valid = (counts >= min_overlap) & (denom > 0.0)
    out = np.zeros_like(num)
    np.divide(num, denom, out=out, where=valid)
    return np.clip(out, -1.0, 1.0)


def community_similarity(W: np.ndarray, u_i: int, u_k: int, theta: float) -> float:
    """Sum of membership products over clusters where both users exceed theta."""
    if not 0.0 <= theta < 1.0:
        raise ValueError(f"theta must be in [0, 1), got {theta}")
    row_i = W[u_i]
    row_k = W[u_k]
    shared = (row_i > theta) & (row_k > theta)
    return float((row_i[shared] * row_k[shared]).sum())


def community_matrix(W: np.ndarray, theta: float) -> np.ndarray:
    """All-pairs community similarity via the theta-masked membership matrix."""
    if not 0.0 <= theta < 1.0:
        raise ValueError(f"theta must be in [0, 1), got {theta}")
    masked = np.where(W > theta, W, 0.0)
    return masked @ masked.T


def hybrid_weight(cfg: MixConfig, comm: float, cor: float) -> float:
    """Blend of the two similarities: alpha*comm + beta*cor."""
    return cfg.alpha * comm + cfg.beta * cor


def predict_rating(
    u_i: int,
    item: int,
    R: RatingMatrix,
    W: np.ndarray,
    cfg: MixConfig,
    min_overlap: int = DEFAULT_MIN_OVERLAP,
) -> PredictionResult:
    """Weighted mean of other users' ratings on ``item``.

    Every training user who rated the item and has a strictly positive
    hybrid weight contributes; community structure enters only through the
    weights.  With no eligible neighbor the user's training mean is used,
    and the global mean if the user has no training ratings at all.
    """
    _check_user(R, u_i)
    if not 0 <= item < R.n:
        raise ValueError(f"unknown item index {item}")
    raters = R.matrix[:, item].nonzero()[0]
    raters = raters[raters != u_i]
    if raters.size:
        weights = np.array(
            [
                hybrid_weight(
                    cfg,
                    community_similarity(W, u_i, k, cfg.theta),
                    pearson(R, u_i, k, min_overlap),
                )
                for k in raters
            ]
        )
        positive = weights > 0.0
        if np.any(positive):
            values = np.array([R.value(k, item) for k in raters[positive]])
            value = float((weights[positive] * values).sum() / weights[positive].sum())
            return PredictionResult(
                _clamp(value, R), int(positive.sum()), FALLBACK_NONE
            )
    if R.matrix.indptr[u_i] == R.matrix.indptr[u_i + 1]:
        return PredictionResult(_clamp(R.global_mean, R), 0, FALLBACK_GLOBAL_MEAN)
    return PredictionResult(_clamp(float(R.user_means[u_i]), R), 0, FALLBACK_USER_MEAN)


class HybridPredictor:
    """Batch predictor with precomputed all-pairs similarity matrices.

    Semantics match :func:`predict_rating` exactly; this path just avoids
    recomputing pairwise Pearson and community terms per request.
    """

    def __init__(
        self,
        R: RatingMatrix,
        W: np.ndarray,
        cfg: MixConfig,
        min_overlap: int = DEFAULT_MIN_OVERLAP,
        cor: np.ndarray | None = None,
    ):
        if W.shape[0] != R.m:
            raise ValueError(
                f"membership matrix has {W.shape[0]} rows for {R.m} users"
            )
        self.R = R
        self.cfg = cfg
        self.cor = pearson_matrix(R, min_overlap) if cor is None else cor
        self.comm = community_matrix(W, cfg.theta)
        self._by_item = R.matrix.tocsc()
        self._rated = np.diff(R.matrix.indptr) > 0

    def predict(self, u_i: int, item: int) -> PredictionResult:
        if not 0 <= u_i < self.R.m:
            raise ValueError(f"unknown user index {u_i}")
        if not 0 <= item < self.R.n:
            raise ValueError(f"unknown item index {item}")
        start, end = self._by_item.indptr[item], self._by_item.indptr[item + 1]
        raters = self._by_item.indices[start:end]
        values = self._by_item.data[start:end]
        keep = raters != u_i
        raters, values = raters[keep], values[keep]
        if raters.size:
            weights = self.cfg.alpha * self.comm[u_i, raters] + self.cfg.beta * self.cor[u_i, raters]
            positive = weights > 0.0
            if np.any(positive):
                value = float(
                    (weights[positive] * values[positive]).sum() / weights[positive].sum()
                )
                return PredictionResult(
                    _clamp(value, self.R), int(positive.sum()), FALLBACK_NONE
                )
        if not self._rated[u_i]:
            return PredictionResult(_clamp(self.R.global_mean, self.R), 0, FALLBACK_GLOBAL_MEAN)
        return PredictionResult(
            _clamp(float(self.R.user_means[u_i]), self.R), 0, FALLBACK_USER_MEAN
        )


def _clamp(value: float, R: RatingMatrix) -> float:
    return float(np.clip(value, R.scale_min, R.scale_max))


def _check_user(R: RatingMatrix, user: int) -> None:
    if not 0 <= user < R.m:
        raise ValueError(f"unknown user index {user}")
