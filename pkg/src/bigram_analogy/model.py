"""The analogy model: retrieve similar nouns (optionally one extra adjective),
keep the top-k known bigrams, and average their rating distributions.

Candidates are scored by noun_similarity * adjective_similarity, with
identical words scoring 1. Queries present in memory short-circuit to the
stored distribution when memorization is enabled; queries with no known
candidates fall back to a null prediction.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .corpus import Bigram, MemoryStore, RatingDistribution, N_BINS
from .similarity import UnknownWordError, adjective_similarity, nearest_words

NOUN_ONLY = "noun_only"
NOUN_PLUS_ADJECTIVE = "noun_plus_adjective"

MEMORIZED = "memorized"
ANALOGY = "analogy"
NULL_FALLBACK = "null_fallback"
BASELINE = "baseline"

K_MAX = 5  # working-memory-style cap on retained bigrams


class ConfigError(ValueError):
    """Inconsistent analogy configuration."""


@dataclass(frozen=True)
class AnalogyConfig:
    noun_backend: object
    mode: str = NOUN_ONLY
    k: int = 5
    mem: bool = True
    noun_pool: int = 100
    extra_adjectives: int = 1
    adjective_backend: object | None = None

    def __post_init__(self):
        if self.mode not in (NOUN_ONLY, NOUN_PLUS_ADJECTIVE):
            raise ConfigError(f"unknown mode: {self.mode!r}")
        if not 1 <= self.k <= K_MAX:
            raise ConfigError(f"k must be in [1,{K_MAX}]: {self.k}")
        if self.noun_pool < 1:
            raise ConfigError("noun_pool must be positive")
        if self.extra_adjectives < 0:
            raise ConfigError("extra_adjectives must be non-negative")
        if self.mode == NOUN_PLUS_ADJECTIVE:
            if self.adjective_backend is None:
                raise ConfigError("noun_plus_adjective mode requires an adjective backend")
            if not getattr(self.adjective_backend, "supports_adjectives", True):
                raise ConfigError(
                    "adjective backend does not support adjectives; use noun_only mode")

    def fingerprint(self) -> str:
        adj = getattr(self.adjective_backend, "name", None)
        return (f"mode={self.mode} k={self.k} mem={self.mem} "
                f"noun_pool={self.noun_pool} extra_adjectives={self.extra_adjectives} "
                f"noun_backend={getattr(self.noun_backend, 'name', '?')} "
                f"adjective_backend={adj}")


@dataclass(frozen=True)
class Prediction:
    bigram: Bigram
    distribution: RatingDistribution | None
    provenance: str
    support: tuple[tuple[Bigram, float], ...] = ()
    error: str | None = None

    def is_null(self) -> bool:
        return self.distribution is None


def candidate_bigrams(store: MemoryStore, query: Bigram, config: AnalogyConfig,
                      exclude: frozenset[Bigram] = frozenset()
                      ) -> list[tuple[Bigram, float]]:
    """All known bigrams reachable from the query, scored and ranked.

    Noun candidates are the top `noun_pool` store nouns by similarity (the
    query noun always scores 1 and so is always in the pool). In N+A mode the
    adjective set additionally includes the `extra_adjectives` nearest store
    adjectives. The query bigram itself is never a candidate.
    """
    noun_scores: dict[str, float] = {}
    store_nouns = store.nouns()
    if query.noun in store_nouns:
        noun_scores[query.noun] = 1.0
    pool = config.noun_pool - len(noun_scores)
    if pool > 0:
        for noun, score in nearest_words(config.noun_backend, query.noun,
                                         store_nouns, pool):
            noun_scores[noun] = score

    adj_scores: dict[str, float] = {query.adjective: 1.0}
    if config.mode == NOUN_PLUS_ADJECTIVE and config.extra_adjectives > 0:
        others = store.adjectives() - {query.adjective}
        backend = config.adjective_backend
        if not backend.knows(query.adjective):
            raise UnknownWordError(
                f"query adjective not scorable: {query.adjective!r}")
        scored = [(a, adjective_similarity(backend, query.adjective, a))
                  for a in others if backend.knows(a)]
        scored.sort(key=lambda ws: (-ws[1], ws[0]))
        for adj, score in scored[:config.extra_adjectives]:
            adj_scores[adj] = score

    candidates = []
    for adj, a_score in adj_scores.items():
        for noun, n_score in noun_scores.items():
            cand = Bigram(adj, noun)
            if cand == query or cand in exclude or cand not in store:
                continue
            candidates.append((cand, n_score * a_score))
    candidates.sort(key=lambda cs: (-cs[1], cs[0]))
    return candidates


def _average(members: list[tuple[Bigram, float]],
             store: MemoryStore) -> RatingDistribution:
    dists = [store.entries[b] for b, _ in members]
    probs = tuple(sum(d.probs[i] for d in dists) / len(dists) for i in range(N_BINS))
    return RatingDistribution(probs, sum(d.sample_size for d in dists))


def predict(store: MemoryStore, query: Bigram, config: AnalogyConfig,
            exclude: frozenset[Bigram] = frozenset()) -> Prediction:
    if config.mem and query in store and query not in exclude:
        return Prediction(query, store.entries[query], MEMORIZED)
    candidates = candidate_bigrams(store, query, config, exclude)
    if not candidates:
        return Prediction(query, None, NULL_FALLBACK)
    support = tuple(candidates[:config.k])
    return Prediction(query, _average(list(support), store), ANALOGY, support)


def predict_all(store: MemoryStore, targets: list[Bigram],
                config: AnalogyConfig) -> list[Prediction]:
    """One prediction per target, order-preserving; backend failures become
    null predictions carrying the error message rather than aborting the batch."""
    predictions = []
    for target in targets:
        try:
            predictions.append(predict(store, target, config))
        except UnknownWordError as e:
            predictions.append(Prediction(target, None, NULL_FALLBACK, error=str(e)))
    return predictions


def tune_k(store: MemoryStore, config: AnalogyConfig,
           grid=(1, 2, 3, 4, 5)) -> tuple[int, dict[int, float]]:
    """Grid search for k by leave-one-out on the store (memorization off).

    Each store bigram is predicted with itself excluded from its own
    candidates; the score is mean JS divergence against its stored
    distribution, with null predictions scoring the metric maximum of 1.
    Ties prefer the smaller k.
    """
    from .evaluation import js_divergence

    grid = sorted(set(grid))
    if not grid:
        raise ValueError("empty tuning grid")
    if len(store) < 2:
        raise ValueError("store too small to tune on")
    scores: dict[int, float] = {}
    targets = store.bigrams()
    # Candidate rankings are independent of k; compute once per target.
    rankings = {}
    for target in targets:
        try:
            rankings[target] = candidate_bigrams(store, target, config,
                                                 exclude=frozenset({target}))
        except UnknownWordError:
            rankings[target] = []
    for k in grid:
        total = 0.0
        for target in targets:
            ranked = rankings[target]
            if not ranked:
                total += 1.0
                continue
            predicted = _average(ranked[:k], store)
            total += js_divergence(predicted, store.entries[target])
        scores[k] = total / len(targets)
    best_k = min(grid, key=lambda k: (scores[k], k))
    return best_k, scores


def with_k(config: AnalogyConfig, k: int) -> AnalogyConfig:
    return replace(config, k=k)
