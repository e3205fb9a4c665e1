"""Analogy model and evaluation harness for adjective-noun membership inferences."""

from .corpus import (Bigram, BigramRecord, MemoryStore, RatingDistribution,
                     TrainingPolicy, build_training_set, distribution_from_ratings,
                     load_dataset)
from .model import AnalogyConfig, Prediction, candidate_bigrams, predict, \
    predict_all, tune_k
from .evaluation import EvalReport, evaluate, holm_bonferroni, js_divergence, \
    ks_test, ols_r2, within_1sd_accuracy

__all__ = [
    "Bigram", "BigramRecord", "MemoryStore", "RatingDistribution",
    "TrainingPolicy", "build_training_set", "distribution_from_ratings",
    "load_dataset", "AnalogyConfig", "Prediction", "candidate_bigrams",
    "predict", "predict_all", "tune_k", "EvalReport", "evaluate",
    "holm_bonferroni", "js_divergence", "ks_test", "ols_r2",
    "within_1sd_accuracy",
]
