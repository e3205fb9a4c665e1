"""Metrics, statistical tests, baselines, and model-comparison analyses.

The central metric is base-2 Jensen-Shannon divergence between predicted and
human rating distributions (range [0,1]); null predictions score the maximum
of 1. Per-bigram Kolmogorov-Smirnov tests with Holm-Bonferroni correction
flag distributions that differ significantly, and the within-1-SD accuracy
gives a lenient mean-rating metric for sparse predictions.
"""

from __future__ import annotations

import math
import sys
import zlib
from dataclasses import dataclass

import numpy as np
from scipy import special, stats

from .corpus import Bigram, BigramRecord, RatingDistribution, N_BINS, \
    PRIVATIVE, distribution_from_ratings
from .model import Prediction, BASELINE
from .similarity import TaxonomyGraph, wu_palmer, UnknownWordError

MIN_P = sys.float_info.min


class EvaluationError(ValueError):
    """Misaligned or invalid evaluation inputs."""


# ---------------------------------------------------------------------------
# Core metrics

def _jsd_arrays(p: np.ndarray, q: np.ndarray) -> float:
    m = 0.5 * (p + q)
    kl_pm = float(np.sum(special.rel_entr(p, m))) / math.log(2)
    kl_qm = float(np.sum(special.rel_entr(q, m))) / math.log(2)
    return 0.5 * kl_pm + 0.5 * kl_qm


def js_divergence(p: RatingDistribution, q: RatingDistribution) -> float:
    """Base-2 Jensen-Shannon divergence, 0 for identical and 1 for disjoint."""
    value = _jsd_arrays(np.asarray(p.probs), np.asarray(q.probs))
    return min(max(value, 0.0), 1.0)


def ks_test(ratings: list[int], predicted: RatingDistribution | None
            ) -> tuple[float, float]:
    """One-sample KS of a rating sample against a predicted distribution.

    D is the max CDF gap over the 5 bins; the p-value is the asymptotic
    Kolmogorov survival probability at sqrt(n)*D. A null prediction is
    maximally different by definition.
    """
    if not ratings:
        raise EvaluationError("no ratings")
    n = len(ratings)
    if predicted is None:
        return 1.0, MIN_P
    empirical = distribution_from_ratings(list(ratings))
    ecdf = np.cumsum(empirical.probs)
    pcdf = np.cumsum(predicted.probs)
    d = float(np.max(np.abs(ecdf - pcdf)))
    p = float(special.kolmogorov(math.sqrt(n) * d))
    return d, min(max(p, MIN_P), 1.0)


def holm_bonferroni(p_values: list[float], alpha: float = 0.05) -> list[bool]:
    """Step-down Holm rejection flags, returned in the input order."""
    if not 0.0 < alpha < 1.0:
        raise EvaluationError(f"alpha out of (0,1): {alpha}")
    m = len(p_values)
    order = sorted(range(m), key=lambda i: p_values[i])
    flags = [False] * m
    for rank, i in enumerate(order):
        if p_values[i] <= alpha / (m - rank):
            flags[i] = True
        else:
            break
    return flags


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def within_1sd_accuracy(predicted_mean: float, gold: RatingDistribution) -> bool:
    """True iff the rounded prediction lands in the rounded band mu +/- sigma."""
    if gold.sample_size < 2:
        raise EvaluationError("within-1-SD band needs >= 2 gold samples")
    if not 1.0 <= predicted_mean <= N_BINS:
        raise EvaluationError(f"predicted mean out of [1,{N_BINS}]: {predicted_mean}")
    mu, sigma = gold.mean(), gold.sd()
    lo = max(1, _round_half_up(mu - sigma))
    hi = min(N_BINS, _round_half_up(mu + sigma))
    return lo <= _round_half_up(predicted_mean) <= hi


# ---------------------------------------------------------------------------
# Report assembly

@dataclass(frozen=True)
class SubsetSpec:
    """Named predicate over gold records selecting an aggregation subset."""

    name: str
    predicate: object  # callable BigramRecord -> bool

    def matches(self, record: BigramRecord) -> bool:
        return bool(self.predicate(record))


def default_subsets(training: frozenset[Bigram] = frozenset()) -> list[SubsetSpec]:
    return [
        SubsetSpec("novel", lambda r: r.bigram not in training),
        SubsetSpec("zero_freq", lambda r: r.corpus_frequency == 0),
        SubsetSpec("privative", lambda r: r.adjective_class == PRIVATIVE),
    ]


@dataclass(frozen=True)
class BigramScore:
    js: float
    ks_stat: float
    ks_p_raw: float
    ks_significant: bool
    within_1sd: bool
    provenance: str


@dataclass(frozen=True)
class EvalReport:
    per_bigram: dict[Bigram, BigramScore]
    aggregates: dict[str, float]
    config_fingerprint: str

    def significant_bigrams(self) -> list[Bigram]:
        return sorted(b for b, s in self.per_bigram.items() if s.ks_significant)


def evaluate(predictions: list[Prediction], gold: list[BigramRecord],
             subsets: list[SubsetSpec] | None = None, alpha: float = 0.05,
             config_fingerprint: str = "") -> EvalReport:
    """Score predictions against gold records and aggregate over subsets."""
    gold_by_bigram = {r.bigram: r for r in gold}
    pred_by_bigram = {p.bigram: p for p in predictions}
    if set(gold_by_bigram) != set(pred_by_bigram):
        missing = set(gold_by_bigram) ^ set(pred_by_bigram)
        raise EvaluationError(
            f"predictions and gold disagree on {len(missing)} bigrams, "
            f"e.g. {sorted(missing)[:3]}")
    if subsets is None:
        subsets = default_subsets()

    ordered = sorted(gold_by_bigram)
    p_values = []
    partial = {}
    for bigram in ordered:
        record = gold_by_bigram[bigram]
        pred = pred_by_bigram[bigram]
        if pred.is_null():
            js, within = 1.0, False
        else:
            js = js_divergence(pred.distribution, record.distribution)
            within = within_1sd_accuracy(pred.distribution.mean(), record.distribution)
        d, p = ks_test(list(record.ratings), pred.distribution)
        p_values.append(p)
        partial[bigram] = (js, d, p, within, pred.provenance)
    flags = holm_bonferroni(p_values, alpha)

    per_bigram = {
        b: BigramScore(js, d, p, flag, within, prov)
        for (b, (js, d, p, within, prov)), flag in zip(partial.items(), flags)
    }
    aggregates = {
        "total_js": float(np.mean([s.js for s in per_bigram.values()])),
        "within_1sd_accuracy": float(np.mean([s.within_1sd for s in per_bigram.values()])),
        "significant_count": float(sum(s.ks_significant for s in per_bigram.values())),
    }
    for subset in subsets:
        members = [b for b in ordered if subset.matches(gold_by_bigram[b])]
        aggregates[f"{subset.name}_js"] = (
            float(np.mean([per_bigram[b].js for b in members])) if members else math.nan)
        aggregates[f"{subset.name}_within_1sd"] = (
            float(np.mean([per_bigram[b].within_1sd for b in members]))
            if members else math.nan)
    return EvalReport(per_bigram, aggregates, config_fingerprint)


# ---------------------------------------------------------------------------
# Baselines

def _point_mass(rating: int, sample_size: int = 1) -> RatingDistribution:
    probs = [0.0] * N_BINS
    probs[rating - 1] = 1.0
    return RatingDistribution(tuple(probs), sample_size)


UNIFORM = RatingDistribution((0.2,) * N_BINS, 1)


def baseline_uniform():
    """Predict the uniform distribution for every bigram."""
    def predictor(record: BigramRecord) -> Prediction:
        return Prediction(record.bigram, UNIFORM, BASELINE)
    return predictor


def baseline_majority():
    """Guess 'Unsure' (3) for privative-class and 'Definitely yes' (5) for
    subsective-class adjectives."""
    def predictor(record: BigramRecord) -> Prediction:
        rating = 3 if record.adjective_class == PRIVATIVE else 5
        return Prediction(record.bigram, _point_mass(rating), BASELINE)
    return predictor


def _bigram_rng(seed: int, bigram: Bigram, salt: int = 0) -> np.random.Generator:
    # Stable per-bigram substream so parallel and sequential runs agree.
    return np.random.default_rng([seed, salt, zlib.crc32(str(bigram).encode())])


def baseline_random(seed: int):
    """Guess a single uniform-random rating per bigram, reproducibly."""
    def predictor(record: BigramRecord) -> Prediction:
        rating = int(_bigram_rng(seed, record.bigram).integers(1, N_BINS + 1))
        return Prediction(record.bigram, _point_mass(rating), BASELINE)
    return predictor


def run_baseline(predictor, records: list[BigramRecord]) -> list[Prediction]:
    return [predictor(r) for r in records]


def human_resample_reference(records: list[BigramRecord], repetitions: int = 1000,
                             seed: int = 0) -> float:
    """How far a fresh same-size sample of the human distribution tends to sit
    from the empirical one, in mean JS divergence. Noise floor for the metric."""
    if repetitions < 1:
        raise EvaluationError("repetitions must be positive")
    total = 0.0
    for record in records:
        if record.distribution.sample_size < 2:
            raise EvaluationError(f"need >= 2 ratings to resample: {record.bigram}")
        rng = _bigram_rng(seed, record.bigram, salt=1)
        probs = np.asarray(record.distribution.probs)
        n = record.distribution.sample_size
        draws = rng.choice(N_BINS, size=(repetitions, n), p=probs)
        acc = 0.0
        for row in draws:
            counts = np.bincount(row, minlength=N_BINS)
            acc += _jsd_arrays(counts / n, probs)
        total += acc / repetitions
    return total / len(records)


# ---------------------------------------------------------------------------
# Regression comparison

def ols_r2(x: list[float], y: list[float]) -> tuple[float, float, float, float]:
    """Simple least squares of y on x: (slope, intercept, r_squared, p_slope)."""
    if len(x) != len(y):
        raise EvaluationError(f"length mismatch: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 3:
        raise EvaluationError("need at least 3 points")
    xa, ya = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    sxx = float(np.sum((xa - xa.mean()) ** 2))
    if sxx == 0:
        raise EvaluationError("x is constant")
    slope = float(np.sum((xa - xa.mean()) * (ya - ya.mean()))) / sxx
    intercept = float(ya.mean()) - slope * float(xa.mean())
    residuals = ya - (slope * xa + intercept)
    ssr = float(np.sum(residuals ** 2))
    sst = float(np.sum((ya - ya.mean()) ** 2))
    r_squared = 0.0 if sst == 0 else 1.0 - ssr / sst
    if ssr == 0:
        p_slope = 0.0
    else:
        se = math.sqrt(ssr / (n - 2) / sxx)
        t = slope / se
        p_slope = 2.0 * float(stats.t.sf(abs(t), n - 2))
    return slope, intercept, r_squared, p_slope


# ---------------------------------------------------------------------------
# Analogy-difficulty heuristics

@dataclass(frozen=True)
class DifficultyFlags:
    no_high_freq_neighbor: bool
    conflicting_convergent_neighbors: bool
    nonconvergent_neighbors: bool


def estimate_analogy_difficulty(record: BigramRecord, records: list[BigramRecord],
                                taxonomy: TaxonomyGraph,
                                noun_freqs: dict[str, int],
                                threshold: float = 0.5) -> DifficultyFlags:
    """Heuristic flags for when analogy is likely to be hard for a bigram:
    no high-frequency neighboring noun, neighboring bigrams whose convergent
    ratings conflict, or neighboring bigrams with non-convergent ratings."""
    noun = record.bigram.noun
    if noun not in taxonomy:
        raise UnknownWordError(f"noun not in taxonomy: {noun!r}")
    if noun not in noun_freqs:
        raise UnknownWordError(f"noun not in frequency table: {noun!r}")
    dataset_nouns = sorted({r.bigram.noun for r in records} - {noun})
    neighbors = {
        other for other in dataset_nouns
        if other in taxonomy and wu_palmer(taxonomy, noun, other) >= threshold
    }
    median_freq = float(np.median([noun_freqs.get(w, 0)
                                   for w in sorted({r.bigram.noun for r in records})]))
    no_high_freq = not any(noun_freqs.get(w, 0) > median_freq for w in neighbors)

    nearby = [r for r in records
              if r.bigram.noun in neighbors
              and r.bigram.adjective == record.bigram.adjective]
    means = [r.distribution.mean() for r in nearby]
    low = any(m <= 2.0 for m in means)
    high = any(m >= 4.0 for m in means)
    conflicting = low and high
    nonconvergent = any(2.0 < m < 4.0 for m in means)
    return DifficultyFlags(no_high_freq, conflicting, nonconvergent)
