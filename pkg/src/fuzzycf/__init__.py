"""Fuzzy community-based collaborative filtering on PageRank user features.

Pipeline: co-rating user graph -> personalized PageRank features -> PCA ->
fuzzy c-means communities -> hybrid (community + correlation) rating
prediction, with an MAE/RMSE evaluation harness and hyperparameter sweeps.
"""

from .datasets import (
    ParseError,
    RatingMatrix,
    RatingsDataset,
    RatingTriple,
    parse_filmtrust,
    parse_movielens,
    rating_matrix,
    split_train_test,
)
from .experiment import (
    ExperimentConfig,
    ExperimentReport,
    SeedResult,
    StageCache,
    StageError,
    SweepTable,
    default_config,
    mae,
    rmse,
    run_experiment,
    sweep,
)
from .fcm import FcmConfig, FcmModel, fcm_fit, membership_of
from .graph import (
    AdjacencyMatrix,
    SimilarityMatrix,
    TransitionMatrix,
    cooccurrence_similarity,
    modularity,
    threshold_adjacency,
    transition_matrix,
)
from .pagerank import (
    PprConfig,
    PprFeatureMatrix,
    PprResult,
    personalized_pagerank,
    ppr_feature_matrix,
    ppr_linear_solve_oracle,
)
from .pca import PcaModel, pca_fit, pca_transform
from .predict import (
    HybridPredictor,
    MixConfig,
    PredictionResult,
    community_similarity,
    hybrid_weight,
    pearson,
    pearson_matrix,
    predict_rating,
)

__version__ = "0.1.0"

__all__ = [
    "AdjacencyMatrix",
    "ExperimentConfig",
    "ExperimentReport",
    "FcmConfig",
    "FcmModel",
    "HybridPredictor",
    "MixConfig",
    "ParseError",
    "PcaModel",
    "PprConfig",
    "PprFeatureMatrix",
    "PprResult",
    "PredictionResult",
    "RatingMatrix",
    "RatingsDataset",
    "RatingTriple",
    "SeedResult",
    "SimilarityMatrix",
    "StageCache",
    "StageError",
    "SweepTable",
    "TransitionMatrix",
    "community_similarity",
    "cooccurrence_similarity",
    "default_config",
    "fcm_fit",
    "hybrid_weight",
    "mae",
    "membership_of",
    "modularity",
    "parse_filmtrust",
    "parse_movielens",
    "pca_fit",
    "pca_transform",
    "pearson",
    "pearson_matrix",
    "personalized_pagerank",
    "ppr_feature_matrix",
    "ppr_linear_solve_oracle",
    "predict_rating",
    "rating_matrix",
    "rmse",
    "run_experiment",
    "split_train_test",
    "sweep",
    "threshold_adjacency",
    "transition_matrix",
]
