"""Pearson, community similarity, hybrid weights, and rating prediction."""

import numpy as np
import pytest

from fuzzycf.datasets import rating_matrix
from fuzzycf.predict import (
    FALLBACK_GLOBAL_MEAN,
    FALLBACK_NONE,
    FALLBACK_USER_MEAN,
    HybridPredictor,
    MixConfig,
    community_matrix,
    community_similarity,
    hybrid_weight,
    pearson,
    pearson_matrix,
    predict_rating,
)

from conftest import make_dataset, random_dataset


def matrix_of(records, scale=(1.0, 5.0)):
    return rating_matrix(make_dataset(records, scale))


class TestPearson:
    def test_identical_vectors(self):
        R = matrix_of(
            [("x", "a", 1), ("x", "b", 3), ("x", "c", 5),
             ("y", "a", 1), ("y", "b", 3), ("y", "c", 5)]
        )
        assert pearson(R, 0, 1) == pytest.approx(1.0)

    def test_antipodal_vectors(self):
        R = matrix_of(
            [("x", "a", 1), ("x", "b", 3), ("x", "c", 5),
             ("y", "a", 5), ("y", "b", 3), ("y", "c", 1)]
        )
        # Both overall means are 3, so centered vectors are exact opposites.
        assert pearson(R, 0, 1) == pytest.approx(-1.0)

    def test_constant_user_is_degenerate(self):
        R = matrix_of(
            [("x", "a", 4), ("x", "b", 4), ("x", "c", 4),
             ("y", "a", 1), ("y", "b", 3), ("y", "c", 5)]
        )
        assert pearson(R, 0, 1) == 0.0

    def test_small_overlap_is_zero(self):
        R = matrix_of([("x", "a", 1), ("x", "b", 3), ("y", "a", 2), ("y", "c", 4)])
        assert pearson(R, 0, 1) == 0.0  # only one co-rated item

    def test_centering_uses_overall_means(self):
        # x rates d as well, moving its overall mean off the co-rated mean.
        R = matrix_of(
            [("x", "a", 2), ("x", "b", 4), ("x", "d", 5),
             ("y", "a", 1), ("y", "b", 3)]
        )
        mean_x = (2 + 4 + 5) / 3
        mean_y = 2.0
        dev_x = np.array([2 - mean_x, 4 - mean_x])
        dev_y = np.array([1 - mean_y, 3 - mean_y])
        expected = (dev_x * dev_y).sum() / np.sqrt((dev_x**2).sum() * (dev_y**2).sum())
        assert pearson(R, 0, 1) == pytest.approx(expected, abs=1e-12)

    def test_symmetry(self):
        R = rating_matrix(random_dataset(12, 15, 0.4, seed=3))
        for a in range(6):
            for b in range(6):
                assert pearson(R, a, b) == pytest.approx(pearson(R, b, a), abs=1e-12)

    def test_matrix_matches_pairwise(self):
        for seed in (1, 9):
            R = rating_matrix(random_dataset(15, 20, 0.35, seed=seed))
            mat = pearson_matrix(R)
            for a in range(R.m):
                for b in range(R.m):
                    assert mat[a, b] == pytest.approx(pearson(R, a, b), abs=1e-9)


class TestCommunitySimilarity:
    def test_crisp_same_community(self):
        W = np.array([[1.0, 0.0], [1.0, 0.0]])
        assert community_similarity(W, 0, 1, 0.1) == pytest.approx(1.0)

    def test_partial_overlap_above_threshold(self):
        W = np.array([[0.6, 0.4], [0.5, 0.5]])
        assert community_similarity(W, 0, 1, 0.45) == pytest.approx(0.30)

    def test_threshold_empties_intersection(self):
        W = np.array([[0.6, 0.4], [0.5, 0.5]])
        assert community_similarity(W, 0, 1, 0.7) == 0.0

    def test_matrix_matches_pairwise(self):
        rng = np.random.default_rng(2)
        W = rng.dirichlet(np.ones(4), size=10)
        mat = community_matrix(W, 0.2)
        for i in range(10):
            for k in range(10):
                assert mat[i, k] == pytest.approx(
                    community_similarity(W, i, k, 0.2), abs=1e-12
                )

    def test_theta_validation(self):
        W = np.ones((2, 2)) * 0.5
        with pytest.raises(ValueError):
            community_similarity(W, 0, 1, 1.0)


class TestHybridWeight:
    def test_pure_correlation(self):
        cfg = MixConfig(alpha=0.0, beta=1.0)
        assert hybrid_weight(cfg, 0.9, 0.37) == pytest.approx(0.37)

    def test_pure_community(self):
        cfg = MixConfig(alpha=1.0, beta=0.0)
        assert hybrid_weight(cfg, 0.9, 0.37) == pytest.approx(0.9)

    def test_blend(self):
        cfg = MixConfig(alpha=0.4, beta=1.0)
        assert hybrid_weight(cfg, 0.3, 0.5) == pytest.approx(0.62)

    def test_gamma(self):
        assert MixConfig(alpha=0.4, beta=1.0).gamma == pytest.approx(0.4)
        assert MixConfig(alpha=1.0, beta=0.0).gamma == np.inf
        assert MixConfig.from_gamma(2.5).alpha == 2.5

    def test_validation(self):
        with pytest.raises(ValueError):
            MixConfig(alpha=-0.1)
        with pytest.raises(ValueError):
            MixConfig(alpha=0.0, beta=0.0)
        with pytest.raises(ValueError):
            MixConfig(alpha=1.0, theta=1.0)


def crisp_membership(n_users, n_clusters, assignment):
    W = np.zeros((n_users, n_clusters))
    W[np.arange(n_users), assignment] = 1.0
    return W


class TestPredictRating:
    def _fixture(self):
        # u0 and u1/u2 agree on a,b; u1 and u2 rate the target item t.
        records = [
            ("u0", "a", 1), ("u0", "b", 5),
            ("u1", "a", 1), ("u1", "b", 5), ("u1", "t", 4),
            ("u2", "a", 5), ("u2", "b", 1), ("u2", "t", 2),
        ]
        ds = make_dataset(records)
        return ds, rating_matrix(ds)

    def test_single_eligible_neighbor(self):
        ds, R = self._fixture()
        W = crisp_membership(3, 2, [0, 0, 1])
        cfg = MixConfig(alpha=0.0, beta=1.0)
        # u2 is anti-correlated, so only u1 contributes.
        result = predict_rating(0, ds.item_index["t"], R, W, cfg)
        assert result.value == pytest.approx(4.0)
        assert result.neighbor_count == 1
        assert result.fallback == FALLBACK_NONE

    def test_equal_weights_average(self):
        records = [
            ("a", "x", 3), ("a", "y", 1),
            ("b", "x", 3), ("b", "y", 1), ("b", "t", 2),
            ("c", "x", 3), ("c", "y", 1), ("c", "t", 4),
        ]
        ds = make_dataset(records)
        R = rating_matrix(ds)
        W = crisp_membership(3, 2, [0, 0, 0])
        cfg = MixConfig(alpha=1.0, beta=0.0)  # equal community weights 1.0
        result = predict_rating(0, ds.item_index["t"], R, W, cfg)
        assert result.value == pytest.approx(3.0)
        assert result.neighbor_count == 2

    def test_fallback_user_mean(self):
        records = [
            ("a", "x", 3), ("a", "y", 3.4),
            ("b", "t", 5),
        ]
        ds = make_dataset(records)
        R = rating_matrix(ds)
        W = crisp_membership(2, 2, [0, 1])
        cfg = MixConfig(alpha=1.0, beta=0.0, theta=0.1)  # disjoint communities
        result = predict_rating(0, ds.item_index["t"], R, W, cfg)
        assert result.value == pytest.approx(3.2)
        assert result.fallback == FALLBACK_USER_MEAN
        assert result.neighbor_count == 0

    def test_fallback_global_mean_for_cold_user(self):
        ds = make_dataset([("a", "x", 2), ("b", "x", 4), ("b", "t", 5), ("c", "x", 3)])
        train = ds.with_triples([t for t in ds.triples if t.user != "c"])
        R = rating_matrix(train)
        W = crisp_membership(3, 2, [0, 0, 1])
        cfg = MixConfig(alpha=1.0, beta=0.0)
        result = predict_rating(ds.user_index["c"], ds.item_index["t"], R, W, cfg)
        assert result.fallback == FALLBACK_GLOBAL_MEAN
        assert result.value == pytest.approx(R.global_mean)

    def test_unknown_indices_rejected(self):
        ds, R = self._fixture()
        W = crisp_membership(3, 2, [0, 0, 1])
        cfg = MixConfig(alpha=1.0)
        with pytest.raises(ValueError):
            predict_rating(5, 0, R, W, cfg)
        with pytest.raises(ValueError):
            predict_rating(0, 99, R, W, cfg)

    def test_prediction_within_scale(self):
        rng = np.random.default_rng(4)
        ds = random_dataset(15, 12, 0.5, seed=4)
        R = rating_matrix(ds)
        W = rng.dirichlet(np.ones(3), size=15)
        cfg = MixConfig(alpha=0.7, beta=1.0, theta=0.1)
        for u in range(15):
            for j in range(12):
                value = predict_rating(u, j, R, W, cfg).value
                assert R.scale_min <= value <= R.scale_max


class TestScaleInvariance:
    def test_joint_scaling_leaves_predictions_unchanged(self):
        rng = np.random.default_rng(10)
        ds = random_dataset(20, 15, 0.4, seed=10)
        R = rating_matrix(ds)
        W = rng.dirichlet(np.ones(4), size=20)
        base = MixConfig(alpha=0.4, beta=1.0, theta=0.1)
        scaled = MixConfig(alpha=0.4 * 7.3, beta=7.3, theta=0.1)
        checked = 0
        while checked < 100:
            u = int(rng.integers(20))
            j = int(rng.integers(15))
            a = predict_rating(u, j, R, W, base)
            b = predict_rating(u, j, R, W, scaled)
            assert abs(a.value - b.value) <= 1e-12
            assert a.fallback == b.fallback
            checked += 1


def reference_user_cf(R, target, item, min_overlap=2):
    """Independent plain Pearson user-based CF, loops only.

    Weighted mean of raw ratings over positively-correlated raters of the
    item; correlations centered by each user's overall mean.
    """
    dense = R.matrix.toarray()
    means = []
    for u in range(dense.shape[0]):
        rated = dense[u] > 0
        means.append(dense[u][rated].mean() if rated.any() else R.global_mean)
    num = 0.0
    den = 0.0
    count = 0
    for other in range(dense.shape[0]):
        if other == target or dense[other, item] <= 0:
            continue
        both = (dense[target] > 0) & (dense[other] > 0)
        if both.sum() < min_overlap:
            continue
        da = dense[target][both] - means[target]
        db = dense[other][both] - means[other]
        denom = np.sqrt((da * da).sum() * (db * db).sum())
        if denom == 0:
            continue
        cor = (da * db).sum() / denom
        if cor > 0:
            num += cor * dense[other, item]
            den += cor
            count += 1
    if count == 0:
        return None
    return float(np.clip(num / den, R.scale_min, R.scale_max))


class TestDegenerateToClassicalCF:
    def test_alpha_zero_equals_reference(self):
        rng = np.random.default_rng(20)
        ds = random_dataset(20, 18, 0.45, seed=20)
        R = rating_matrix(ds)
        W = rng.dirichlet(np.ones(3), size=20)  # ignored when alpha = 0
        cfg = MixConfig(alpha=0.0, beta=1.0, theta=0.1)
        compared = 0
        for u in range(20):
            for j in range(18):
                expected = reference_user_cf(R, u, j)
                if expected is None:
                    continue
                result = predict_rating(u, j, R, W, cfg)
                assert result.fallback == FALLBACK_NONE
                assert abs(result.value - expected) <= 1e-9
                compared += 1
        assert compared > 50


class TestHybridPredictorBatch:
    def test_matches_reference_op(self):
        rng = np.random.default_rng(6)
        ds = random_dataset(18, 14, 0.4, seed=6)
        R = rating_matrix(ds)
        W = rng.dirichlet(np.ones(4), size=18)
        cfg = MixConfig(alpha=0.4, beta=1.0, theta=0.15)
        batch = HybridPredictor(R, W, cfg)
        for u in range(18):
            for j in range(14):
                a = predict_rating(u, j, R, W, cfg)
                b = batch.predict(u, j)
                assert abs(a.value - b.value) <= 1e-9
                assert a.fallback == b.fallback
                assert a.neighbor_count == b.neighbor_count
