"""Word-similarity backends: embedding cosine, taxonomy Wu-Palmer, manual table.

All three expose the same query surface (score a word pair, check whether a
word is scorable) so the analogy model can treat them interchangeably. The
taxonomy backend covers nouns only and refuses adjective queries.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class SimilarityError(ValueError):
    """Bad input to a similarity backend or loader."""


class UnknownWordError(SimilarityError):
    """Query word not scorable by the backend."""


class UnsupportedWordKindError(SimilarityError):
    """Backend cannot score this kind of word (e.g. adjectives in a taxonomy)."""


# ---------------------------------------------------------------------------
# Embeddings

def cosine(a: np.ndarray, b: np.ndarray) -> float:
    if a.shape != b.shape:
        raise SimilarityError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise SimilarityError("cosine undefined for zero vectors")
    return float(np.dot(a, b) / (na * nb))


@dataclass
class EmbeddingTable:
    dimension: int
    vectors: dict[str, np.ndarray]
    duplicates_skipped: int = 0

    def __contains__(self, word: str) -> bool:
        return word in self.vectors

    def missing(self, words) -> list[str]:
        return sorted(w for w in set(words) if w not in self.vectors)


def load_embeddings(path: str) -> EmbeddingTable:
    """Parse a whitespace-separated word-vector text file (GloVe style)."""
    vectors: dict[str, np.ndarray] = {}
    dimension = None
    duplicates = 0
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            parts = line.rstrip("\n").split(" ")
            if len(parts) < 2:
                if not line.strip():
                    continue
                raise SimilarityError(f"line {line_no}: no vector components")
            word = parts[0].lower()
            try:
                vec = np.array([float(x) for x in parts[1:]], dtype=np.float64)
            except ValueError:
                raise SimilarityError(f"line {line_no}: non-numeric component") from None
            if dimension is None:
                dimension = vec.shape[0]
            elif vec.shape[0] != dimension:
                raise SimilarityError(
                    f"line {line_no}: dimension {vec.shape[0]} != {dimension}")
            if not vec.any():
                raise SimilarityError(f"line {line_no}: zero vector for {word!r}")
            if word in vectors:
                duplicates += 1
                continue
            vectors[word] = vec
    if not vectors:
        raise SimilarityError("empty embedding file")
    return EmbeddingTable(dimension, vectors, duplicates)


# ---------------------------------------------------------------------------
# Taxonomy

@dataclass
class TaxonomyGraph:
    """Hypernym DAG over synsets with a lemma index (most-frequent sense first)."""

    parents: dict[str, tuple[str, ...]]  # synset -> hypernyms ("" entries = roots)
    lemma_index: dict[str, tuple[str, ...]]
    depth: dict[str, int] = field(default_factory=dict)
    _ancestry: dict[str, dict[str, int]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.depth:
            self.depth = _compute_depths(self.parents)
        for word, synsets in self.lemma_index.items():
            for s in synsets:
                if s not in self.parents:
                    raise SimilarityError(f"lemma {word!r} maps to unknown synset {s!r}")

    def __contains__(self, word: str) -> bool:
        return word in self.lemma_index

    def ancestors(self, synset: str) -> dict[str, int]:
        """Map of hypernyms (including the synset itself) to their depths."""
        cached = self._ancestry.get(synset)
        if cached is None:
            cached = {synset: self.depth[synset]}
            for p in self.parents[synset]:
                cached.update(self.ancestors(p))
            self._ancestry[synset] = cached
        return cached


def _compute_depths(parents: dict[str, tuple[str, ...]]) -> dict[str, int]:
    # depth(root) = 1; depth(child) = 1 + min over parents. Cycles are errors.
    depth: dict[str, int] = {}
    visiting: set[str] = set()

    def visit(node: str) -> int:
        if node in depth:
            return depth[node]
        if node in visiting:
            raise SimilarityError(f"hypernym cycle through {node!r}")
        visiting.add(node)
        ps = parents[node]
        d = 1 if not ps else 1 + min(visit(p) for p in ps)
        visiting.discard(node)
        depth[node] = d
        return d

    for node in parents:
        visit(node)
    return depth


def load_taxonomy_tsv(path: str) -> TaxonomyGraph:
    """Simplified taxonomy: `synset_id<TAB>parent_ids<TAB>lemmas` per line.

    parent_ids and lemmas are comma-separated; an empty parent field marks a
    root. Lemma order within a line is sense order (most frequent first).
    """
    parents: dict[str, tuple[str, ...]] = {}
    lemma_index: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.rstrip("\n").split("\t")
            if len(fields) != 3:
                raise SimilarityError(f"line {line_no}: expected 3 tab-separated fields")
            synset, parent_field, lemma_field = fields
            if synset in parents:
                raise SimilarityError(f"line {line_no}: duplicate synset {synset!r}")
            parents[synset] = tuple(p for p in parent_field.split(",") if p)
            for lemma in (w.strip().lower() for w in lemma_field.split(",") if w.strip()):
                lemma_index.setdefault(lemma, []).append(synset)
    if not parents:
        raise SimilarityError("empty taxonomy file")
    return TaxonomyGraph(parents, {w: tuple(s) for w, s in lemma_index.items()})


def load_wordnet_taxonomy(data_path: str, index_path: str) -> TaxonomyGraph:
    """Parse native WordNet 3.x `data.noun` / `index.noun` database files."""
    parents: dict[str, tuple[str, ...]] = {}
    with open(data_path, encoding="utf-8", errors="replace") as f:
        for line in f:
            if line.startswith("  ") or not line.strip():
                continue
            fields = line.split(" ")
            offset = fields[0]
            w_cnt = int(fields[3], 16)
            i = 4 + 2 * w_cnt
            p_cnt = int(fields[i])
            i += 1
            hypernyms = []
            for _ in range(p_cnt):
                symbol, target, pos = fields[i], fields[i + 1], fields[i + 2]
                i += 4
                if symbol in ("@", "@i") and pos == "n":
                    hypernyms.append(target)
            parents[offset] = tuple(hypernyms)
    lemma_index: dict[str, tuple[str, ...]] = {}
    with open(index_path, encoding="utf-8", errors="replace") as f:
        for line in f:
            if line.startswith("  ") or not line.strip():
                continue
            fields = line.split()
            lemma = fields[0].lower()
            synset_cnt = int(fields[2])
            offsets = tuple(o for o in fields[-synset_cnt:] if o in parents)
            if offsets:
                lemma_index[lemma] = offsets
    if not parents:
        raise SimilarityError(f"no synsets parsed from {data_path}")
    return TaxonomyGraph(parents, lemma_index)


def wu_palmer(taxonomy: TaxonomyGraph, w1: str, w2: str, senses: int = 2) -> float:
    """Max Wu-Palmer score over the first `senses` synsets of each word.

    Per synset pair: 2*depth(LCS) / (depth(s1) + depth(s2)), LCS = deepest
    shared hypernym. Disjoint trees in a forest score 0.
    """
    for w in (w1, w2):
        if w not in taxonomy:
            raise UnknownWordError(f"word not in taxonomy: {w!r}")
    best = 0.0
    for s1 in taxonomy.lemma_index[w1][:senses]:
        anc1 = taxonomy.ancestors(s1)
        for s2 in taxonomy.lemma_index[w2][:senses]:
            anc2 = taxonomy.ancestors(s2)
            common = anc1.keys() & anc2.keys()
            if not common:
                continue
            lcs_depth = max(anc1[c] for c in common)
            best = max(best, 2.0 * lcs_depth / (taxonomy.depth[s1] + taxonomy.depth[s2]))
    return best


# ---------------------------------------------------------------------------
# Manual adjective table

@dataclass
class ManualAdjectiveTable:
    """Hand-set, possibly asymmetric adjective similarities with a default."""

    sim: dict[tuple[str, str], float]
    default: float
    vocabulary: frozenset[str]

    def __post_init__(self):
        for (a, b), v in self.sim.items():
            if not 0.0 <= v <= 1.0:
                raise SimilarityError(f"similarity out of [0,1] for {a}->{b}: {v}")
        if not 0.0 <= self.default <= 1.0:
            raise SimilarityError(f"default similarity out of [0,1]: {self.default}")

    @staticmethod
    def from_pairs(pairs: dict[tuple[str, str], float],
                   default: float = 0.5) -> "ManualAdjectiveTable":
        vocab = frozenset(w for pair in pairs for w in pair)
        return ManualAdjectiveTable(dict(pairs), default, vocab)


# Hand-set asymmetric similarities for the 12 dataset adjectives, scaled to
# sit on the same footing as Wu-Palmer scores (0.5 for siblings). Pairs not
# listed fall back to the default of 0.5.
_MANUAL_SIMILARITIES = {
    ("artificial", "fake"): 0.75, ("artificial", "false"): 0.75,
    ("artificial", "counterfeit"): 0.5, ("artificial", "knockoff"): 0.5,
    ("counterfeit", "knockoff"): 0.9, ("counterfeit", "fake"): 0.75,
    ("counterfeit", "false"): 0.75, ("counterfeit", "artificial"): 0.5,
    ("fake", "artificial"): 0.75, ("fake", "counterfeit"): 0.75,
    ("fake", "false"): 0.75, ("fake", "knockoff"): 0.75,
    ("false", "fake"): 0.9, ("false", "counterfeit"): 0.75,
    ("false", "knockoff"): 0.75, ("false", "artificial"): 0.75,
    ("knockoff", "counterfeit"): 0.9, ("knockoff", "fake"): 0.75,
    ("former", "artificial"): 0.5, ("former", "counterfeit"): 0.5,
    ("former", "fake"): 0.5, ("former", "false"): 0.5,
    ("former", "knockoff"): 0.5,
    ("homemade", "artificial"): 0.8, ("homemade", "fake"): 0.8,
    ("homemade", "false"): 0.8, ("homemade", "tiny"): 0.75,
    ("homemade", "multicolored"): 0.75, ("homemade", "useful"): 0.5,
    ("homemade", "illegal"): 0.5, ("homemade", "unimportant"): 0.5,
}


def builtin_manual_table() -> ManualAdjectiveTable:
    """The hand-set adjective similarity table over the 12 dataset adjectives."""
    return ManualAdjectiveTable.from_pairs(_MANUAL_SIMILARITIES, default=0.5)


def load_manual_table(path: str) -> ManualAdjectiveTable:
    """TSV `from<TAB>to<TAB>score`, with one `default<TAB><TAB>score` row."""
    pairs: dict[tuple[str, str], float] = {}
    default = None
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.rstrip("\n").split("\t")
            if len(fields) != 3:
                raise SimilarityError(f"line {line_no}: expected 3 tab-separated fields")
            src, dst, score_s = fields
            try:
                score = float(score_s)
            except ValueError:
                raise SimilarityError(f"line {line_no}: bad score {score_s!r}") from None
            if src == "default":
                default = score
            else:
                pairs[(src.strip().lower(), dst.strip().lower())] = score
    if default is None:
        raise SimilarityError("manual table is missing a default row")
    table = ManualAdjectiveTable.from_pairs(pairs, default)
    return table


# ---------------------------------------------------------------------------
# Backends

class EmbeddingBackend:
    """Cosine similarity over a loaded embedding table. Works for any word."""

    supports_adjectives = True

    def __init__(self, table: EmbeddingTable, name: str = "embedding"):
        self.table = table
        self.name = name

    def knows(self, word: str) -> bool:
        return word in self.table

    def score(self, w1: str, w2: str) -> float:
        for w in (w1, w2):
            if w not in self.table:
                raise UnknownWordError(f"no embedding for {w!r}")
        return cosine(self.table.vectors[w1], self.table.vectors[w2])


class TaxonomyBackend:
    """Wu-Palmer similarity over a noun taxonomy. Refuses adjective queries."""

    supports_adjectives = False

    def __init__(self, taxonomy: TaxonomyGraph, senses: int = 2, name: str = "taxonomy"):
        self.taxonomy = taxonomy
        self.senses = senses
        self.name = name

    def knows(self, word: str) -> bool:
        return word in self.taxonomy

    def score(self, w1: str, w2: str) -> float:
        return wu_palmer(self.taxonomy, w1, w2, self.senses)


class ManualAdjectiveBackend:
    """Lookup into the hand-set adjective table; self-similarity is always 1."""

    supports_adjectives = True

    def __init__(self, table: ManualAdjectiveTable, name: str = "manual"):
        self.table = table
        self.name = name

    def knows(self, word: str) -> bool:
        return word in self.table.vocabulary

    def score(self, w1: str, w2: str) -> float:
        if w1 == w2:
            return 1.0
        for w in (w1, w2):
            if w not in self.table.vocabulary:
                raise UnknownWordError(f"adjective not in manual table: {w!r}")
        return self.table.sim.get((w1, w2), self.table.default)


def adjective_similarity(backend, a1: str, a2: str) -> float:
    """Score an adjective pair, rejecting backends that cannot rate adjectives."""
    if not getattr(backend, "supports_adjectives", True):
        raise UnsupportedWordKindError(
            f"{backend.name} backend provides no adjective similarity")
    if a1 == a2:
        return 1.0
    return backend.score(a1, a2)


def nearest_words(backend, query: str, candidates, n: int) -> list[tuple[str, float]]:
    """Top-n candidates by descending backend score, excluding the query itself.

    Candidates the backend cannot score are skipped. Ties break
    lexicographically.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not backend.knows(query):
        raise UnknownWordError(f"query not scorable by {backend.name}: {query!r}")
    scored = []
    for word in set(candidates):
        if word == query or not backend.knows(word):
            continue
        scored.append((word, backend.score(query, word)))
    scored.sort(key=lambda ws: (-ws[1], ws[0]))
    return scored[:n]


def count_unscorable(backend, words) -> int:
    return sum(1 for w in set(words) if not backend.knows(w))
