"""Folding human-elicited analogy phrases into the model's memory.

Free-text analogy phrases are filtered down to well-formed adjective-noun
bigrams using a POS lexicon; the rating given for the source bigram is
credited to the analogical bigram and accumulated into a (sparse) rating
distribution.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

from .corpus import (Bigram, DatasetError, MemoryStore, N_BINS,
                     distribution_from_ratings)

WRONG_ARITY = "wrong_arity"
NOT_ADJECTIVE = "not_adjective"
NOT_NOUN = "not_noun"
UNKNOWN_WORD = "unknown_word"
EMPTY = "empty"


@dataclass(frozen=True)
class PosLexicon:
    """Which words have an adjective sense and which have a noun sense."""

    adjectives: frozenset[str]
    nouns: frozenset[str]

    def known(self, word: str) -> bool:
        return word in self.adjectives or word in self.nouns

    @staticmethod
    def from_wordnet_index_files(index_adj_path: str,
                                 index_noun_path: str) -> "PosLexicon":
        return PosLexicon(_read_index_lemmas(index_adj_path),
                          _read_index_lemmas(index_noun_path))


def _read_index_lemmas(path: str) -> frozenset[str]:
    lemmas = set()
    with open(path, encoding="utf-8", errors="replace") as f:
        for line in f:
            if line.startswith("  ") or not line.strip():
                continue
            lemmas.add(line.split()[0].lower())
    return frozenset(lemmas)


@dataclass(frozen=True)
class ElicitedAnalogy:
    source_bigram: Bigram
    analogy_text: str
    rating: int

    def __post_init__(self):
        if not self.analogy_text.strip():
            raise ValueError("empty analogy text")
        if not 1 <= self.rating <= N_BINS:
            raise ValueError(f"rating out of [1,{N_BINS}]: {self.rating}")


@dataclass(frozen=True)
class Rejection:
    reason: str
    text: str


def parse_analogy_phrase(text: str, lexicon: PosLexicon) -> Bigram | Rejection:
    """Accept a phrase only if it is exactly [adjective] [noun] per the lexicon.

    Hyphenated modifiers count as a single token. Rejections are returned as
    values, never raised.
    """
    tokens = text.strip().lower().split()
    if not tokens:
        return Rejection(EMPTY, text)
    if len(tokens) != 2:
        return Rejection(WRONG_ARITY, text)
    adj, noun = tokens
    if not lexicon.known(adj) or not lexicon.known(noun):
        return Rejection(UNKNOWN_WORD, text)
    if adj not in lexicon.adjectives:
        return Rejection(NOT_ADJECTIVE, text)
    if noun not in lexicon.nouns:
        return Rejection(NOT_NOUN, text)
    return Bigram(adj, noun)


def load_elicitations(path: str) -> list[ElicitedAnalogy]:
    """CSV `source_adjective,source_noun,analogy_text,rating`."""
    required = {"source_adjective", "source_noun", "analogy_text", "rating"}
    analogies = []
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise DatasetError(f"elicitation file must have columns {sorted(required)}")
        for line_no, row in enumerate(reader, start=2):
            try:
                analogies.append(ElicitedAnalogy(
                    Bigram(row["source_adjective"].strip().lower(),
                           row["source_noun"].strip().lower()),
                    row["analogy_text"],
                    int(row["rating"])))
            except (ValueError, KeyError) as e:
                raise DatasetError(f"line {line_no}: {e}") from None
    return analogies


def merge_into_memory(store: MemoryStore, analogies: list[ElicitedAnalogy],
                      lexicon: PosLexicon) -> MemoryStore:
    """New store with accepted analogy bigrams folded in.

    Ratings accumulate per bigram; for bigrams already in the store the
    elicited ratings are appended to the stored sample. The input store is
    left untouched.
    """
    new_ratings: dict[Bigram, list[int]] = {}
    for analogy in analogies:
        parsed = parse_analogy_phrase(analogy.analogy_text, lexicon)
        if isinstance(parsed, Rejection):
            continue
        new_ratings.setdefault(parsed, []).append(analogy.rating)

    entries = dict(store.entries)
    for bigram in sorted(new_ratings):
        ratings = []
        if bigram in entries:
            for value, count in enumerate(entries[bigram].counts(), start=1):
                ratings.extend([value] * count)
        ratings.extend(sorted(new_ratings[bigram]))
        entries[bigram] = distribution_from_ratings(ratings)
    return MemoryStore(entries, policy=store.policy)


def acceptance_summary(analogies: list[ElicitedAnalogy],
                       lexicon: PosLexicon) -> dict:
    accepted: set[Bigram] = set()
    rejected: dict[str, int] = {}
    for analogy in analogies:
        parsed = parse_analogy_phrase(analogy.analogy_text, lexicon)
        if isinstance(parsed, Rejection):
            rejected[parsed.reason] = rejected.get(parsed.reason, 0) + 1
        else:
            accepted.add(parsed)
    return {
        "accepted_bigrams": len(accepted),
        "accepted_adjectives": len({b.adjective for b in accepted}),
        "accepted_nouns": len({b.noun for b in accepted}),
        "rejections": rejected,
    }
