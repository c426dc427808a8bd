"""End-to-end experiment runner, error metrics, and hyperparameter sweeps."""

from __future__ import annotations

import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .datasets import (
    RatingMatrix,
    RatingsDataset,
    parse_filmtrust,
    parse_movielens,
    rating_matrix,
    split_train_test,
)
from .fcm import FcmConfig, fcm_fit
from .graph import cooccurrence_similarity, threshold_adjacency, transition_matrix
from .pagerank import PprConfig, ppr_feature_matrix
from .pca import pca_fit, pca_transform
from .predict import (
    DEFAULT_MIN_OVERLAP,
    FALLBACK_GLOBAL_MEAN,
    HybridPredictor,
    MixConfig,
    pearson_matrix,
)

DATASET_PARSERS: dict[str, Callable[[str], RatingsDataset]] = {
    "movielens": parse_movielens,
    "filmtrust": parse_filmtrust,
}

SWEEP_AXES = ("cluster_count", "gamma", "tau")


class StageError(RuntimeError):
    """A pipeline stage failed; carries the stage name for diagnostics."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.__cause__ = cause


def mae(predictions: Sequence[tuple[float, float]]) -> float:
    """Mean absolute deviation between predicted and actual ratings.

    Summed with ``math.fsum`` so the result is exactly rounded and
    independent of the order of the prediction log.
    """
    arr = _as_pairs(predictions)
    return math.fsum(np.abs(arr[:, 0] - arr[:, 1]).tolist()) / arr.shape[0]


def rmse(predictions: Sequence[tuple[float, float]]) -> float:
    """Root mean squared deviation between predicted and actual ratings."""
    arr = _as_pairs(predictions)
    return math.sqrt(
        math.fsum(((arr[:, 0] - arr[:, 1]) ** 2).tolist()) / arr.shape[0]
    )


def _as_pairs(predictions) -> np.ndarray:
    arr = np.asarray(predictions, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("prediction list is empty")
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected (predicted, actual) pairs, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one end-to-end run needs, seeds included.

    ``pca_target`` defaults to an explicit 20 components rather than a
    variance fraction: the feature matrix keeps a large self-importance
    entry per user, which smears variance over every dimension, and fuzzy
    memberships collapse to uniform unless the space is cut down hard.
    An integer target is clamped to the available feature count.
    """

    dataset: str
    data_path: str
    tau: int
    ppr: PprConfig = PprConfig()
    pca_target: int | float = 20
    clusters: int = 15
    fuzziness: float = 2.0
    fcm_tol: float = 1e-6
    fcm_max_iter: int = 300
    fcm_seeds: tuple[int, ...] = (1, 2, 3, 4, 5)
    gamma: float = 0.4
    theta: float = 0.1
    min_overlap: int = DEFAULT_MIN_OVERLAP
    train_fraction: float = 0.8
    seed: int = 0

    def __post_init__(self) -> None:
        if self.dataset not in DATASET_PARSERS:
            raise ValueError(
                f"dataset must be one of {sorted(DATASET_PARSERS)}, got {self.dataset!r}"
            )
        if self.tau < 0:
            raise ValueError(f"tau must be nonnegative, got {self.tau}")
        if not self.fcm_seeds:
            raise ValueError("fcm_seeds must be non-empty")
        if self.gamma < 0:
            raise ValueError(f"gamma must be nonnegative, got {self.gamma}")
        # Delegate the rest to the component configs.
        MixConfig.from_gamma(self.gamma, self.theta)
        FcmConfig(self.clusters, self.fuzziness, self.fcm_tol, self.fcm_max_iter)

    def mix(self) -> MixConfig:
        return MixConfig.from_gamma(self.gamma, self.theta)

    def fcm(self, seed: int) -> FcmConfig:
        return FcmConfig(self.clusters, self.fuzziness, self.fcm_tol, self.fcm_max_iter, seed)


# Paper-tuned defaults: (tau, clusters, gamma) per dataset.
DATASET_DEFAULTS = {
    "movielens": {"tau": 15, "clusters": 15, "gamma": 0.4},
    "filmtrust": {"tau": 7, "clusters": 5, "gamma": 1.0},
}


def default_config(dataset: str, data_path: str, **overrides) -> ExperimentConfig:
    """Config preloaded with the tuned tau / cluster-count / gamma for a dataset."""
    if dataset not in DATASET_DEFAULTS:
        raise ValueError(f"dataset must be one of {sorted(DATASET_DEFAULTS)}, got {dataset!r}")
    params: dict = dict(DATASET_DEFAULTS[dataset])
    params.update(overrides)
    return ExperimentConfig(dataset=dataset, data_path=data_path, **params)


@dataclass(frozen=True)
class SeedResult:
    """Metrics for one clustering seed, with the raw prediction log."""

    seed: int
    mae: float
    rmse: float
    coverage: float
    predictions: np.ndarray  # rows of (predicted, actual)


@dataclass(frozen=True)
class ExperimentReport:
    """Per-seed metrics plus aggregates and wall-clock per pipeline stage."""

    config: ExperimentConfig
    seed_results: tuple[SeedResult, ...]
    stage_seconds: dict[str, float]

    @property
    def mean_mae(self) -> float:
        return float(np.mean([r.mae for r in self.seed_results]))

    @property
    def std_mae(self) -> float:
        return float(np.std([r.mae for r in self.seed_results]))

    @property
    def mean_rmse(self) -> float:
        return float(np.mean([r.rmse for r in self.seed_results]))

    @property
    def std_rmse(self) -> float:
        return float(np.std([r.rmse for r in self.seed_results]))

    @property
    def mean_coverage(self) -> float:
        return float(np.mean([r.coverage for r in self.seed_results]))


def effective_pca_target(target: int | float, n_features: int) -> int | float:
    """Clamp an explicit component count to the available feature count."""
    if isinstance(target, (int, np.integer)):
        return int(min(target, n_features))
    return target


class StageCache:
    """Keyed store for expensive pipeline stages shared across sweep cells."""

    def __init__(self) -> None:
        self._store: dict = {}
        self.hits = 0
        self.misses = 0

    def get_or(self, key, compute: Callable):
        if key in self._store:
            self.hits += 1
            return self._store[key]
        self.misses += 1
        value = compute()
        self._store[key] = value
        return value


@contextmanager
def _stage(name: str, timings: dict[str, float]):
    start = time.perf_counter()
    try:
        yield
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc
    finally:
        timings[name] = timings.get(name, 0.0) + (time.perf_counter() - start)


def run_experiment(cfg: ExperimentConfig, cache: StageCache | None = None) -> ExperimentReport:
    """Execute the full pipeline once per clustering seed and aggregate metrics.

    Test pairs whose item has no training rating are scored with the global
    training mean and still count toward the metrics.  Coverage is the
    fraction of test pairs predicted without that global-mean fallback.
    """
    cache = cache if cache is not None else StageCache()
    timings: dict[str, float] = {}

    split_key = (cfg.dataset, cfg.data_path, cfg.train_fraction, cfg.seed)

    with _stage("parse", timings):
        dataset = cache.get_or(
            ("parse", cfg.dataset, cfg.data_path),
            lambda: DATASET_PARSERS[cfg.dataset](cfg.data_path),
        )
    with _stage("split", timings):
        train, test = cache.get_or(
            ("split",) + split_key,
            lambda: split_train_test(dataset, cfg.train_fraction, cfg.seed),
        )
    with _stage("train-matrix", timings):
        R = cache.get_or(("matrix",) + split_key, lambda: rating_matrix(train))

    ppr_key = split_key + (
        cfg.tau,
        cfg.ppr.damping,
        cfg.ppr.tol,
        cfg.ppr.max_iter,
        cfg.ppr.leak_to,
    )
    with _stage("graph", timings):
        M = cache.get_or(
            ("graph",) + split_key + (cfg.tau,),
            lambda: transition_matrix(
                threshold_adjacency(cooccurrence_similarity(R), cfg.tau)
            ),
        )
    with _stage("pagerank", timings):
        features = cache.get_or(
            ("ppr",) + ppr_key, lambda: ppr_feature_matrix(M, cfg.ppr)
        )
    with _stage("pca", timings):
        pca_target = effective_pca_target(cfg.pca_target, features.matrix.shape[1])
        reduced = cache.get_or(
            ("pca",) + ppr_key + (pca_target,),
            lambda: pca_transform(
                pca_fit(features.matrix, pca_target), features.matrix
            ),
        )
    with _stage("pearson", timings):
        cor = cache.get_or(
            ("pearson",) + split_key + (cfg.min_overlap,),
            lambda: pearson_matrix(R, cfg.min_overlap),
        )

    test_users = np.array([dataset.user_index[t.user] for t in test.triples])
    test_items = np.array([dataset.item_index[t.item] for t in test.triples])
    test_ratings = np.array([t.rating for t in test.triples])
    item_train_counts = np.diff(R.matrix.tocsc().indptr)

    seed_results = []
    for fcm_seed in cfg.fcm_seeds:
        with _stage("clustering", timings):
            model = cache.get_or(
                ("fcm",) + ppr_key + (
                    pca_target,
                    cfg.clusters,
                    cfg.fuzziness,
                    cfg.fcm_tol,
                    cfg.fcm_max_iter,
                    fcm_seed,
                ),
                lambda: fcm_fit(reduced, cfg.fcm(fcm_seed)),
            )
        with _stage("predict", timings):
            predictor = HybridPredictor(
                R, model.memberships, cfg.mix(), cfg.min_overlap, cor=cor
            )
            predicted = np.empty(len(test_ratings))
            covered = np.empty(len(test_ratings), dtype=bool)
            for idx, (u, j) in enumerate(zip(test_users, test_items)):
                if item_train_counts[j] == 0:
                    # Train-cold item: global-mean fallback, mapped here so the
                    # predictor itself never sees an impossible neighborhood.
                    predicted[idx] = R.global_mean
                    covered[idx] = False
                else:
                    result = predictor.predict(int(u), int(j))
                    predicted[idx] = result.value
                    covered[idx] = result.fallback != FALLBACK_GLOBAL_MEAN
            log = np.column_stack([predicted, test_ratings])
            seed_results.append(
                SeedResult(
                    seed=fcm_seed,
                    mae=mae(log),
                    rmse=rmse(log),
                    coverage=float(covered.mean()),
                    predictions=log,
                )
            )
    return ExperimentReport(cfg, tuple(seed_results), timings)


@dataclass(frozen=True)
class SweepCell:
    """One sweep point: either a finished report or the failure message."""

    value: float
    report: ExperimentReport | None
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.report is None


@dataclass(frozen=True)
class SweepTable:
    axis: str
    cells: tuple[SweepCell, ...]

    def best_value(self) -> float:
        """Axis value with the lowest mean MAE among successful cells."""
        ok = [c for c in self.cells if not c.failed]
        if not ok:
            raise ValueError("all sweep cells failed")
        return min(ok, key=lambda c: c.report.mean_mae).value


def sweep(
    cfg: ExperimentConfig,
    axis: str,
    values: Sequence[float],
    cache: StageCache | None = None,
) -> SweepTable:
    """Run one experiment per axis value, everything else held fixed.

    A failing cell is recorded with its error instead of aborting the rest.
    Cached stages (PageRank, PCA, correlations) are shared across cells, so
    cluster-count and gamma sweeps never recompute PageRank.
    """
    if axis not in SWEEP_AXES:
        raise ValueError(f"axis must be one of {SWEEP_AXES}, got {axis!r}")
    if not values:
        raise ValueError("sweep needs at least one value")
    if axis in ("cluster_count", "tau"):
        fractional = [v for v in values if not float(v).is_integer()]
        if fractional:
            raise ValueError(f"{axis} values must be integers, got {fractional}")
    cache = cache if cache is not None else StageCache()
    cells = []
    for value in values:
        if axis == "cluster_count":
            cell_cfg = replace(cfg, clusters=int(value))
        elif axis == "gamma":
            cell_cfg = replace(cfg, gamma=float(value))
        else:
            cell_cfg = replace(cfg, tau=int(value))
        try:
            cells.append(SweepCell(float(value), run_experiment(cell_cfg, cache)))
        except (StageError, ValueError, OSError) as exc:
            cells.append(SweepCell(float(value), None, str(exc)))
    return SweepTable(axis, tuple(cells))


def report_csv_lines(report: ExperimentReport, axis: str = "run", value: str = "") -> list[str]:
    """CSV rows for one report: one line per seed plus a mean summary row."""
    lines = []
    for r in report.seed_results:
        lines.append(
            f"{axis},{value},{r.seed},{r.mae:.6f},{r.rmse:.6f},{r.coverage:.6f}"
        )
    lines.append(
        f"{axis},{value},mean,{report.mean_mae:.6f},{report.mean_rmse:.6f},"
        f"{report.mean_coverage:.6f}"
    )
    return lines


CSV_HEADER = "axis,value,seed,mae,rmse,coverage"


def sweep_csv_lines(table: SweepTable) -> list[str]:
    """Full sweep CSV body including the header row."""
    lines = [CSV_HEADER]
    for cell in table.cells:
        value_text = _format_axis_value(cell.value)
        if cell.failed:
            lines.append(f"{table.axis},{value_text},failed,nan,nan,nan")
        else:
            lines.extend(report_csv_lines(cell.report, table.axis, value_text))
    return lines


def _format_axis_value(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))
