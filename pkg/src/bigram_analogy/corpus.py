"""Dataset ingestion, rating distributions, and training-set construction.

The dataset is a set of adjective-noun bigrams, each with a class label for
the adjective (privative vs. subsective), a corpus frequency count, and a
sample of 1-5 Likert ratings answering "Is an {adjective} {noun} still a
{noun}?". Ratings are stored both raw and as a normalized 5-bin histogram.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

N_BINS = 5

PRIVATIVE = "privative"
SUBSECTIVE = "subsective"
ADJECTIVE_CLASSES = (PRIVATIVE, SUBSECTIVE)


class DatasetError(ValueError):
    """Malformed or inconsistent dataset input."""


@dataclass(frozen=True, order=True)
class Bigram:
    adjective: str
    noun: str

    def __post_init__(self):
        for name in ("adjective", "noun"):
            value = getattr(self, name)
            if not value or any(ch.isspace() for ch in value):
                raise ValueError(f"{name} must be non-empty without whitespace: {value!r}")

    def __str__(self):
        return f"{self.adjective} {self.noun}"


@dataclass(frozen=True)
class RatingDistribution:
    """Probability vector over the 5 rating bins plus the sample size behind it."""

    probs: tuple[float, ...]
    sample_size: int

    def __post_init__(self):
        if len(self.probs) != N_BINS:
            raise ValueError(f"expected {N_BINS} probabilities, got {len(self.probs)}")
        if self.sample_size < 1:
            raise ValueError("sample_size must be positive")
        if any(p < 0 or p > 1 for p in self.probs):
            raise ValueError(f"probabilities outside [0,1]: {self.probs}")
        if abs(sum(self.probs) - 1.0) > 1e-9:
            raise ValueError(f"probabilities must sum to 1: {self.probs}")

    def mean(self) -> float:
        return sum((i + 1) * p for i, p in enumerate(self.probs))

    def sd(self) -> float:
        mu = self.mean()
        return math.sqrt(sum(p * ((i + 1) - mu) ** 2 for i, p in enumerate(self.probs)))

    def counts(self) -> list[int]:
        """Recover the integer histogram (valid because probs came from counts)."""
        return [round(p * self.sample_size) for p in self.probs]


def distribution_from_ratings(ratings: list[int]) -> RatingDistribution:
    if not ratings:
        raise DatasetError("cannot build a distribution from an empty rating list")
    counts = [0] * N_BINS
    for r in ratings:
        if not isinstance(r, int) or not 1 <= r <= N_BINS:
            raise DatasetError(f"rating out of [1,{N_BINS}]: {r!r}")
        counts[r - 1] += 1
    n = len(ratings)
    return RatingDistribution(tuple(c / n for c in counts), n)


@dataclass(frozen=True)
class BigramRecord:
    bigram: Bigram
    adjective_class: str
    corpus_frequency: int
    ratings: tuple[int, ...]
    distribution: RatingDistribution = field(compare=False)

    @staticmethod
    def make(bigram: Bigram, adjective_class: str, corpus_frequency: int,
             ratings: list[int]) -> "BigramRecord":
        if adjective_class not in ADJECTIVE_CLASSES:
            raise DatasetError(f"unknown adjective class: {adjective_class!r}")
        if corpus_frequency < 0:
            raise DatasetError(f"negative corpus frequency: {corpus_frequency}")
        return BigramRecord(bigram, adjective_class, corpus_frequency,
                            tuple(ratings), distribution_from_ratings(ratings))


@dataclass(frozen=True)
class TrainingPolicy:
    kind: str  # "top_quartile" or "top_x_per_adjective"
    x: int | None = None

    def __post_init__(self):
        if self.kind not in ("top_quartile", "top_x_per_adjective"):
            raise ValueError(f"unknown training policy: {self.kind!r}")
        if self.kind == "top_x_per_adjective" and (self.x is None or self.x < 1):
            raise ValueError("top_x_per_adjective requires x >= 1")

    def describe(self) -> str:
        return self.kind if self.kind == "top_quartile" else f"top_{self.x}_per_adjective"


@dataclass(frozen=True)
class MemoryStore:
    """The model's known bigrams: Bigram -> RatingDistribution, plus provenance."""

    entries: dict[Bigram, RatingDistribution]
    policy: str = "unspecified"

    def __contains__(self, bigram: Bigram) -> bool:
        return bigram in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def bigrams(self) -> list[Bigram]:
        return sorted(self.entries)

    def nouns(self) -> set[str]:
        return {b.noun for b in self.entries}

    def adjectives(self) -> set[str]:
        return {b.adjective for b in self.entries}

    def count_per_adjective(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for b in self.entries:
            counts[b.adjective] = counts.get(b.adjective, 0) + 1
        return counts


# ---------------------------------------------------------------------------
# Loading

WIDE_COLUMNS = {"adjective", "noun", "class", "c4_frequency", "ratings"}
LONG_COLUMNS = {"adjective", "noun", "class", "c4_frequency", "rating"}


def _parse_int(value: str, what: str, line_no: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise DatasetError(f"line {line_no}: {what} is not an integer: {value!r}") from None


def _parse_rating(value: str, line_no: int) -> int:
    r = _parse_int(value, "rating", line_no)
    if not 1 <= r <= N_BINS:
        raise DatasetError(f"line {line_no}: rating out of [1,{N_BINS}]: {r}")
    return r


def load_dataset(path: str) -> list[BigramRecord]:
    """Load the bigram dataset from CSV.

    Two shapes are accepted: wide (one row per bigram, ratings joined with
    ';') and long (one row per rating, collapsed here). Duplicate bigrams in
    the wide format and inconsistent metadata anywhere are errors.
    """
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None:
            raise DatasetError("no records: file is empty")
        columns = set(reader.fieldnames)
        if WIDE_COLUMNS <= columns:
            records = _load_wide(reader)
        elif LONG_COLUMNS <= columns:
            records = _load_long(reader)
        else:
            raise DatasetError(
                f"unrecognized columns {sorted(columns)}; expected "
                f"{sorted(WIDE_COLUMNS)} or {sorted(LONG_COLUMNS)}")
    if not records:
        raise DatasetError("no records")
    _check_class_consistency(records)
    return records


def _row_bigram(row: dict, line_no: int) -> Bigram:
    try:
        return Bigram(row["adjective"].strip().lower(), row["noun"].strip().lower())
    except ValueError as e:
        raise DatasetError(f"line {line_no}: {e}") from None


def _row_class(row: dict, line_no: int) -> str:
    cls = row["class"].strip().lower()
    if cls not in ADJECTIVE_CLASSES:
        raise DatasetError(f"line {line_no}: unknown adjective class: {cls!r}")
    return cls


def _load_wide(reader: csv.DictReader) -> list[BigramRecord]:
    records = []
    seen: set[Bigram] = set()
    for line_no, row in enumerate(reader, start=2):
        if any(row.get(c) is None for c in WIDE_COLUMNS):
            raise DatasetError(f"line {line_no}: missing fields")
        bigram = _row_bigram(row, line_no)
        if bigram in seen:
            raise DatasetError(f"line {line_no}: duplicate bigram: {bigram}")
        seen.add(bigram)
        ratings = [_parse_rating(tok, line_no)
                   for tok in row["ratings"].split(";") if tok.strip()]
        if not ratings:
            raise DatasetError(f"line {line_no}: no ratings for {bigram}")
        records.append(BigramRecord.make(
            bigram, _row_class(row, line_no),
            _parse_int(row["c4_frequency"], "c4_frequency", line_no), ratings))
    return records


def _load_long(reader: csv.DictReader) -> list[BigramRecord]:
    # Collapse one-row-per-rating into one record per bigram, checking that
    # class and frequency never disagree across rows of the same bigram.
    ratings: dict[Bigram, list[int]] = {}
    meta: dict[Bigram, tuple[str, int]] = {}
    order: list[Bigram] = []
    for line_no, row in enumerate(reader, start=2):
        if any(row.get(c) is None for c in LONG_COLUMNS):
            raise DatasetError(f"line {line_no}: missing fields")
        bigram = _row_bigram(row, line_no)
        cls = _row_class(row, line_no)
        freq = _parse_int(row["c4_frequency"], "c4_frequency", line_no)
        if bigram in meta:
            if meta[bigram] != (cls, freq):
                raise DatasetError(f"line {line_no}: inconsistent metadata for {bigram}")
        else:
            meta[bigram] = (cls, freq)
            ratings[bigram] = []
            order.append(bigram)
        ratings[bigram].append(_parse_rating(row["rating"], line_no))
    return [BigramRecord.make(b, meta[b][0], meta[b][1], ratings[b]) for b in order]


def _check_class_consistency(records: list[BigramRecord]) -> None:
    by_adjective: dict[str, str] = {}
    for rec in records:
        adj = rec.bigram.adjective
        if adj in by_adjective and by_adjective[adj] != rec.adjective_class:
            raise DatasetError(f"adjective {adj!r} has inconsistent class labels")
        by_adjective[adj] = rec.adjective_class


def summarize(records: list[BigramRecord]) -> dict:
    return {
        "bigrams": len(records),
        "nouns": len({r.bigram.noun for r in records}),
        "adjectives": len({r.bigram.adjective for r in records}),
        "zero_frequency_bigrams": sum(1 for r in records if r.corpus_frequency == 0),
    }


# ---------------------------------------------------------------------------
# Training-set construction

def _by_frequency(records: list[BigramRecord]) -> list[BigramRecord]:
    # Descending frequency; frequency ties broken by (adjective, noun).
    return sorted(records, key=lambda r: (-r.corpus_frequency, r.bigram))


def select_training(records: list[BigramRecord],
                    policy: TrainingPolicy) -> list[BigramRecord]:
    """Pick the training records for a policy. Zero-frequency bigrams never qualify."""
    nonzero = [r for r in records if r.corpus_frequency > 0]
    if policy.kind == "top_quartile":
        ranked = _by_frequency(records)
        cutoff = math.ceil(0.25 * len(records))
        selected = ranked[:cutoff]
        if selected:
            # Bigrams tied with the boundary frequency are all included.
            boundary = selected[-1].corpus_frequency
            selected += [r for r in ranked[cutoff:] if r.corpus_frequency == boundary]
        return [r for r in selected if r.corpus_frequency > 0]
    per_adjective: dict[str, list[BigramRecord]] = {}
    for rec in _by_frequency(nonzero):
        per_adjective.setdefault(rec.bigram.adjective, []).append(rec)
    selected = []
    for adj in sorted(per_adjective):
        selected.extend(per_adjective[adj][:policy.x])
    return selected


def build_training_set(records: list[BigramRecord],
                       policy: TrainingPolicy) -> MemoryStore:
    selected = select_training(records, policy)
    return MemoryStore({r.bigram: r.distribution for r in selected},
                       policy=policy.describe())
