import textwrap

import pytest

from bigram_analogy.corpus import (Bigram, BigramRecord, MemoryStore,
                                   distribution_from_ratings)


class DictBackend:
    """Test double: similarity looked up in a symmetric pair table."""

    supports_adjectives = True

    def __init__(self, scores, name="dict"):
        self.scores = {}
        for (a, b), v in scores.items():
            self.scores[(a, b)] = v
            self.scores.setdefault((b, a), v)
        self.words = {w for pair in self.scores for w in pair}
        self.name = name

    def knows(self, word):
        return word in self.words

    def score(self, w1, w2):
        if w1 == w2:
            return 1.0
        from bigram_analogy.similarity import UnknownWordError
        try:
            return self.scores[(w1, w2)]
        except KeyError:
            raise UnknownWordError(f"no score for {(w1, w2)}") from None


def record(adjective, noun, cls, freq, ratings):
    return BigramRecord.make(Bigram(adjective, noun), cls, freq, list(ratings))


def store_of(entries):
    """MemoryStore from {(adj, noun): ratings-list}."""
    return MemoryStore({Bigram(a, n): distribution_from_ratings(list(r))
                        for (a, n), r in entries.items()})


def write(path, content):
    path.write_text(textwrap.dedent(content).lstrip("\n"), encoding="utf-8")
    return str(path)


@pytest.fixture
def dataset_csv(tmp_path):
    """Small wide-format dataset: 8 bigrams, 2 adjectives, 2 zero-frequency."""
    return write(tmp_path / "dataset.csv", """
        adjective,noun,class,c4_frequency,ratings
        counterfeit,watch,privative,900,4;5;5;4
        counterfeit,purse,privative,800,5;5;5;5
        counterfeit,scarf,privative,0,4;4;5;5
        counterfeit,reef,privative,0,1;2;1;2
        tiny,watch,subsective,700,5;5;5;5
        tiny,purse,subsective,50,5;4;5;5
        tiny,scarf,subsective,40,4;5;5;5
        tiny,reef,subsective,30,3;4;4;5
        """)


@pytest.fixture
def taxonomy_tsv(tmp_path):
    """Accessory taxonomy: watch/purse/scarf are siblings, reef sits elsewhere."""
    return write(tmp_path / "taxonomy.tsv", """
        entity\t\tentity
        object\tentity\tobject
        accessory\tobject\taccessory
        watch.n.01\taccessory\twatch
        purse.n.01\taccessory\tpurse
        scarf.n.01\taccessory\tscarf
        formation.n.01\tobject\tformation
        reef.n.01\tformation.n.01\treef
        """)


@pytest.fixture
def embeddings_txt(tmp_path):
    return write(tmp_path / "vectors.txt", """
        scarf 1.0 0.2 0.0
        watch 0.9 0.1 0.1
        purse 0.8 0.4 0.0
        reef 0.0 0.1 1.0
        counterfeit 0.5 0.5 0.5
        tiny 0.4 0.6 0.5
        """)
