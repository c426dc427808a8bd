"""Fuzzy c-means: hand-computed memberships, monotone objective, fixed points."""

import numpy as np
import pytest

from fuzzycf.fcm import FcmConfig, fcm_fit, membership_of


def two_tight_pairs():
    return np.array([[0.0, 0.0], [0.1, 0.0], [10.0, 10.0], [10.1, 10.0]])


class TestMembershipOf:
    def test_point_at_centroid(self):
        centroids = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        w = membership_of(centroids, np.array([0.0, 0.0]), 2.0)
        np.testing.assert_array_equal(w, [1.0, 0.0, 0.0])

    def test_equidistant_split(self):
        centroids = np.array([[-1.0], [1.0]])
        w = membership_of(centroids, np.array([0.0]), 2.0)
        np.testing.assert_allclose(w, [0.5, 0.5], atol=1e-15)

    def test_distance_ratio_one_to_two(self):
        # Distances 1 and 2 with fuzziness 2: 1/(1 + (1/2)^2) = 0.8.
        centroids = np.array([[1.0, 0.0], [-2.0, 0.0]])
        w = membership_of(centroids, np.array([0.0, 0.0]), 2.0)
        np.testing.assert_allclose(w, [0.8, 0.2], atol=1e-12)

    def test_coincident_centroids_share_mass(self):
        centroids = np.array([[0.0], [0.0], [5.0]])
        w = membership_of(centroids, np.array([0.0]), 2.0)
        np.testing.assert_array_equal(w, [0.5, 0.5, 0.0])

    def test_rows_sum_to_one_random(self):
        rng = np.random.default_rng(3)
        centroids = rng.normal(size=(4, 3))
        for _ in range(20):
            w = membership_of(centroids, rng.normal(size=3), 1.7)
            assert w.min() >= 0.0
            np.testing.assert_allclose(w.sum(), 1.0, atol=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            membership_of(np.empty((0, 2)), np.zeros(2), 2.0)
        with pytest.raises(ValueError):
            membership_of(np.zeros((2, 2)), np.zeros(2), 1.0)


class TestFit:
    def test_well_separated_pairs(self):
        model = fcm_fit(two_tight_pairs(), FcmConfig(n_clusters=2, seed=1))
        w = model.memberships
        # Points 0,1 dominate one cluster, 2,3 the other.
        own = w.max(axis=1)
        assert (own > 0.95).all()
        assert w[0].argmax() == w[1].argmax()
        assert w[2].argmax() == w[3].argmax()
        assert w[0].argmax() != w[2].argmax()

    def test_midpoint_symmetric_split(self):
        X = np.array([[-1.0, 0.0], [1.0, 0.0], [0.0, 0.0]])
        init = np.array([[-1.0, 0.0], [1.0, 0.0]])
        model = fcm_fit(
            X, FcmConfig(n_clusters=2, tol=1e-14, max_iter=500), init_centroids=init
        )
        np.testing.assert_allclose(model.memberships[2], [0.5, 0.5], atol=1e-9)

    def test_rows_stochastic(self):
        rng = np.random.default_rng(4)
        X = rng.normal(size=(40, 3))
        model = fcm_fit(X, FcmConfig(n_clusters=3, seed=2))
        np.testing.assert_allclose(model.memberships.sum(axis=1), 1.0, atol=1e-9)
        assert model.memberships.min() >= 0.0
        assert model.memberships.max() <= 1.0

    def test_objective_non_increasing(self):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(60, 4))
        model = fcm_fit(X, FcmConfig(n_clusters=4, seed=3, tol=1e-10, max_iter=200))
        diffs = np.diff(model.objective_history)
        assert (diffs <= 1e-10).all()

    def test_fixed_point_self_consistency(self):
        rng = np.random.default_rng(6)
        X = rng.normal(size=(40, 3))
        model = fcm_fit(X, FcmConfig(n_clusters=3, seed=1, tol=1e-13, max_iter=2000))
        assert model.converged
        # Stored memberships are reproduced by one more update from the
        # stored centroids, and the centroids by one more update from them.
        w_again = np.vstack(
            [membership_of(model.centroids, x, 2.0) for x in X]
        )
        np.testing.assert_allclose(w_again, model.memberships, atol=1e-6)
        wm = model.memberships**2.0
        c_again = (wm.T @ X) / wm.sum(axis=0)[:, None]
        np.testing.assert_allclose(c_again, model.centroids, atol=1e-6)

    def test_one_more_round_barely_moves_objective(self):
        rng = np.random.default_rng(12)
        X = rng.normal(size=(50, 3))
        cfg = FcmConfig(n_clusters=3, seed=0, tol=1e-9, max_iter=1000)
        model = fcm_fit(X, cfg)
        assert model.converged
        follow_up = fcm_fit(X, cfg, init_centroids=model.centroids)
        assert abs(follow_up.objective_history[0] - model.objective) < cfg.tol

    def test_row_permutation_permutes_memberships(self):
        rng = np.random.default_rng(7)
        X = rng.normal(size=(30, 3))
        init = X[:4].copy()
        cfg = FcmConfig(n_clusters=4, tol=1e-12, max_iter=500)
        base = fcm_fit(X, cfg, init_centroids=init)
        perm = rng.permutation(30)
        permuted = fcm_fit(X[perm], cfg, init_centroids=init)
        np.testing.assert_allclose(permuted.memberships, base.memberships[perm], atol=1e-12)

    def test_seed_controls_initialization(self):
        rng = np.random.default_rng(8)
        X = rng.normal(size=(25, 2))
        a = fcm_fit(X, FcmConfig(n_clusters=3, seed=1))
        b = fcm_fit(X, FcmConfig(n_clusters=3, seed=1))
        np.testing.assert_array_equal(a.memberships, b.memberships)

    def test_validation(self):
        X = np.zeros((3, 2))
        with pytest.raises(ValueError):
            fcm_fit(X, FcmConfig(n_clusters=4))
        bad = X.copy()
        bad[0, 0] = np.nan
        with pytest.raises(ValueError):
            fcm_fit(bad, FcmConfig(n_clusters=2))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            FcmConfig(n_clusters=1)
        with pytest.raises(ValueError):
            FcmConfig(n_clusters=2, fuzziness=1.0)
        with pytest.raises(ValueError):
            FcmConfig(n_clusters=2, tol=0.0)
