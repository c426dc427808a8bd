"""Principal-component reduction of the PageRank feature matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg


@dataclass(frozen=True)
class PcaModel:
    """Mean vector plus orthonormal component rows, strongest variance first."""

    mean: np.ndarray
    components: np.ndarray
    explained_variance: np.ndarray

    @property
    def n_components(self) -> int:
        return self.components.shape[0]

    @property
    def n_features(self) -> int:
        return self.components.shape[1]


def pca_fit(X: np.ndarray, n_components: int | float = 0.95) -> PcaModel:
    """Fit principal components from the sample covariance of ``X``.

    ``n_components`` is either an explicit component count (int) or a target
    fraction of total variance in (0, 1] (float); with a fraction, the
    smallest count whose cumulative explained variance reaches it is kept.
    Covariance uses 1/(n-1) normalization.  Each component's sign is fixed
    so its largest-magnitude entry is positive, making fits reproducible.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"X must be 2-D, got shape {X.shape}")
    n, d = X.shape
    if n < 2:
        raise ValueError(f"need at least 2 samples to fit, got {n}")
    if d < 1:
        raise ValueError("X must have at least one feature")
    if not np.all(np.isfinite(X)):
        raise ValueError("X contains non-finite values")

    mean = X.mean(axis=0)
    centered = X - mean
    cov = (centered.T @ centered) / (n - 1)
    eigvals, eigvecs = scipy.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = np.clip(eigvals[order], 0.0, None)
    components = eigvecs[:, order].T

    total = float(eigvals.sum())
    if total <= 0.0:
        raise ValueError("degenerate features: input has zero variance")

    if isinstance(n_components, (int, np.integer)):
        k = int(n_components)
        if not 1 <= k <= d:
            raise ValueError(f"component count must be in 1..{d}, got {k}")
    else:
        v = float(n_components)
        if not 0.0 < v <= 1.0:
            raise ValueError(f"variance fraction must be in (0, 1], got {v}")
        ratio = np.cumsum(eigvals) / total
        k = int(np.argmax(ratio >= v - 1e-12)) + 1

    components = components[:k].copy()
    heaviest = np.argmax(np.abs(components), axis=1)
    flip = components[np.arange(k), heaviest] < 0
    components[flip] *= -1.0
    return PcaModel(mean, components, eigvals[:k])


def pca_transform(model: PcaModel, X: np.ndarray) -> np.ndarray:
    """Project rows of ``X`` onto the fitted components after centering."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise ValueError(
            f"X must have shape (*, {model.n_features}), got {X.shape}"
        )
    return (X - model.mean) @ model.components.T
