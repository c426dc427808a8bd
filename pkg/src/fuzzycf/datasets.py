"""Rating-dataset parsing, dense indexing, and train/test splitting."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse


class ParseError(ValueError):
    """A ratings file does not match its declared format."""


@dataclass(frozen=True)
class RatingTriple:
    """One (user, item, rating) record with external string identifiers."""

    user: str
    item: str
    rating: float

    def __post_init__(self) -> None:
        if not self.user or not self.item:
            raise ValueError("user and item identifiers must be non-empty")
        if not self.rating > 0:
            # 0 is reserved for "not rated" throughout the pipeline.
            raise ValueError(f"rating must be > 0, got {self.rating!r}")


@dataclass(frozen=True)
class RatingsDataset:
    """Immutable collection of rating triples plus dense index maps.

    ``user_index`` and ``item_index`` map external identifiers to dense
    indices ``0..m-1`` / ``0..n-1``.  A dataset produced by
    :func:`split_train_test` keeps the *full* universe maps of its parent,
    so train and test halves agree on indices even for entities that only
    occur in one half.
    """

    triples: tuple[RatingTriple, ...]
    user_index: dict[str, int]
    item_index: dict[str, int]
    scale_min: float
    scale_max: float

    @classmethod
    def from_triples(
        cls,
        triples: Iterable[RatingTriple],
        scale_min: float,
        scale_max: float,
    ) -> "RatingsDataset":
        """Build a dataset, assigning dense indices in first-appearance order.

        Raises ValueError on duplicate (user, item) pairs or out-of-scale
        ratings; duplicates are treated as data corruption, not overwrites.
        """
        triples = tuple(triples)
        user_index: dict[str, int] = {}
        item_index: dict[str, int] = {}
        seen: set[tuple[str, str]] = set()
        for t in triples:
            key = (t.user, t.item)
            if key in seen:
                raise ValueError(f"duplicate rating for user {t.user!r}, item {t.item!r}")
            seen.add(key)
            if not scale_min <= t.rating <= scale_max:
                raise ValueError(
                    f"rating {t.rating} outside scale [{scale_min}, {scale_max}] "
                    f"for user {t.user!r}, item {t.item!r}"
                )
            user_index.setdefault(t.user, len(user_index))
            item_index.setdefault(t.item, len(item_index))
        return cls(triples, user_index, item_index, float(scale_min), float(scale_max))

    @property
    def n_users(self) -> int:
        return len(self.user_index)

    @property
    def n_items(self) -> int:
        return len(self.item_index)

    def __len__(self) -> int:
        return len(self.triples)

    def with_triples(self, triples: Sequence[RatingTriple]) -> "RatingsDataset":
        """A dataset over the same index universe holding only ``triples``."""
        return RatingsDataset(
            tuple(triples), self.user_index, self.item_index, self.scale_min, self.scale_max
        )

    def save(self, path: str | Path) -> None:
        """Serialize to JSON (triples, index maps, and scale)."""
        payload = {
            "scale_min": self.scale_min,
            "scale_max": self.scale_max,
            "user_index": self.user_index,
            "item_index": self.item_index,
            "triples": [[t.user, t.item, t.rating] for t in self.triples],
        }
        Path(path).write_text(json.dumps(payload), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "RatingsDataset":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            tuple(RatingTriple(u, i, float(r)) for u, i, r in payload["triples"]),
            {k: int(v) for k, v in payload["user_index"].items()},
            {k: int(v) for k, v in payload["item_index"].items()},
            float(payload["scale_min"]),
            float(payload["scale_max"]),
        )


def parse_movielens(path: str | Path) -> RatingsDataset:
    """Parse an ML-100K style file: TAB-separated ``user item rating timestamp``.

    The timestamp is discarded and the rating scale is fixed to [1, 5].
    """
    triples = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 4:
                raise ParseError(
                    f"{path}: line {lineno}: expected 4 tab-separated fields, got {len(fields)}"
                )
            user, item, rating_text, _timestamp = fields
            try:
                rating = int(rating_text)
            except ValueError:
                raise ParseError(
                    f"{path}: line {lineno}: rating {rating_text!r} is not an integer"
                ) from None
            if not 1 <= rating <= 5:
                raise ParseError(f"{path}: line {lineno}: rating {rating} outside 1..5")
            triples.append(RatingTriple(user, item, float(rating)))
    try:
        return RatingsDataset.from_triples(triples, 1.0, 5.0)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None


# FilmTrust ratings live on a half-step grid.
_FILMTRUST_GRID = {0.5 * k for k in range(1, 9)}


def parse_filmtrust(path: str | Path) -> RatingsDataset:
    """Parse a FilmTrust ratings file: whitespace-separated ``user item rating``.

    Ratings must lie on the half-step grid 0.5, 1.0, ..., 4.0.
    """
    triples = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) != 3:
                raise ParseError(
                    f"{path}: line {lineno}: expected 3 whitespace-separated fields, "
                    f"got {len(fields)}"
                )
            user, item, rating_text = fields
            try:
                rating = float(rating_text)
            except ValueError:
                raise ParseError(
                    f"{path}: line {lineno}: rating {rating_text!r} is not a number"
                ) from None
            if rating not in _FILMTRUST_GRID:
                raise ParseError(
                    f"{path}: line {lineno}: rating {rating} not on the 0.5..4.0 half-step grid"
                )
            triples.append(RatingTriple(user, item, rating))
    try:
        return RatingsDataset.from_triples(triples, 0.5, 4.0)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None


def split_train_test(
    ds: RatingsDataset, train_fraction: float, seed: int
) -> tuple[RatingsDataset, RatingsDataset]:
    """Uniformly random triple-level split into train and test halves.

    ``|train| = round(train_fraction * |ds|)``.  Both halves keep the full
    dataset's index maps, and the same seed always yields the same split.
    """
    if len(ds) == 0:
        raise ValueError("cannot split an empty dataset")
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    n = len(ds)
    n_train = int(round(train_fraction * n))
    perm = np.random.default_rng(seed).permutation(n)
    train_idx = np.sort(perm[:n_train])
    test_idx = np.sort(perm[n_train:])
    train = ds.with_triples([ds.triples[i] for i in train_idx])
    test = ds.with_triples([ds.triples[i] for i in test_idx])
    return train, test


@dataclass(frozen=True)
class RatingMatrix:
    """Sparse user-item rating matrix with absent-means-zero semantics.

    ``user_means[u]`` is the arithmetic mean of user u's stored ratings;
    users with no stored ratings get the global training mean so that
    correlation and fallback predictions are always defined.
    """

    matrix: sparse.csr_matrix
    user_means: np.ndarray
    global_mean: float
    scale_min: float
    scale_max: float

    @property
    def m(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.matrix.shape[1]

    def value(self, user: int, item: int) -> float:
        """Stored rating, or 0.0 when (user, item) is unrated."""
        return float(self.matrix[user, item])

    def rating_counts(self) -> np.ndarray:
        """Number of stored ratings per user."""
        return np.diff(self.matrix.indptr)


def rating_matrix(ds: RatingsDataset) -> RatingMatrix:
    """Assemble the sparse rating matrix and per-user means from a dataset."""
    m, n = ds.n_users, ds.n_items
    rows = np.fromiter((ds.user_index[t.user] for t in ds.triples), dtype=np.int64, count=len(ds))
    cols = np.fromiter((ds.item_index[t.item] for t in ds.triples), dtype=np.int64, count=len(ds))
    data = np.fromiter((t.rating for t in ds.triples), dtype=np.float64, count=len(ds))
    mat = sparse.csr_matrix((data, (rows, cols)), shape=(m, n))
    counts = np.diff(mat.indptr)
    # Mid-scale fallback only matters for a fully empty training matrix.
    global_mean = float(data.mean()) if data.size else 0.5 * (ds.scale_min + ds.scale_max)
    sums = np.asarray(mat.sum(axis=1)).ravel()
    with np.errstate(invalid="ignore", divide="ignore"):
        means = np.where(counts > 0, sums / np.maximum(counts, 1), global_mean)
    return RatingMatrix(mat, means, global_mean, ds.scale_min, ds.scale_max)
