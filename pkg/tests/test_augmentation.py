import pytest

from bigram_analogy.augmentation import (ElicitedAnalogy, PosLexicon, Rejection,
                                         acceptance_summary, load_elicitations,
                                         merge_into_memory, parse_analogy_phrase)
from bigram_analogy.corpus import Bigram, DatasetError, MemoryStore, \
    distribution_from_ratings
from conftest import store_of, write

LEXICON = PosLexicon(
    adjectives=frozenset({"counterfeit", "fake", "hard-boiled", "light"}),
    nouns=frozenset({"money", "watch", "lie", "light"}))


def elicited(adjective, noun, text, rating):
    return ElicitedAnalogy(Bigram(adjective, noun), text, rating)


def test_parse_accepts_adjective_noun():
    assert parse_analogy_phrase("counterfeit money", LEXICON) == \
        Bigram("counterfeit", "money")


def test_parse_normalizes_case_and_space():
    assert parse_analogy_phrase("  Fake   WATCH ", LEXICON) == \
        Bigram("fake", "watch")


def test_parse_rejects_single_word():
    rejection = parse_analogy_phrase("lie", LEXICON)
    assert rejection == Rejection("wrong_arity", "lie")


def test_parse_rejects_three_words():
    rejection = parse_analogy_phrase("a fake watch", LEXICON)
    assert rejection.reason == "wrong_arity"


def test_parse_rejects_non_adjective_first():
    rejection = parse_analogy_phrase("money watch", LEXICON)
    assert rejection.reason == "not_adjective"


def test_parse_rejects_non_noun_second():
    rejection = parse_analogy_phrase("fake counterfeit", LEXICON)
    assert rejection.reason == "not_noun"


def test_parse_rejects_unknown_word():
    rejection = parse_analogy_phrase("fake xylophone", LEXICON)
    assert rejection.reason == "unknown_word"


def test_parse_rejects_empty():
    assert parse_analogy_phrase("   ", LEXICON).reason == "empty"


def test_parse_hyphenated_modifier_is_one_token():
    assert parse_analogy_phrase("hard-boiled lie", LEXICON) == \
        Bigram("hard-boiled", "lie")


def test_parse_word_with_both_senses():
    # "light" is in both sets; adjective reading wins in first position
    assert parse_analogy_phrase("light light", LEXICON) == Bigram("light", "light")


# ---------------------------------------------------------------------------
# Merging

def test_merge_empty_list_is_identity():
    store = store_of({("fake", "watch"): [4, 5]})
    merged = merge_into_memory(store, [], LEXICON)
    assert merged == store
    assert merged is not store


def test_merge_single_rating_point_mass():
    store = MemoryStore({})
    merged = merge_into_memory(
        store, [elicited("fake", "scarf", "counterfeit money", 5)], LEXICON)
    entry = merged.entries[Bigram("counterfeit", "money")]
    assert entry.probs == (0, 0, 0, 0, 1)
    assert entry.sample_size == 1
    assert len(store) == 0  # input untouched


def test_merge_accumulates_ratings():
    store = MemoryStore({})
    analogies = [elicited("fake", "scarf", "counterfeit money", 5),
                 elicited("fake", "belt", "counterfeit money", 1)]
    merged = merge_into_memory(store, analogies, LEXICON)
    entry = merged.entries[Bigram("counterfeit", "money")]
    assert entry.sample_size == 2
    assert entry.probs == (0.5, 0, 0, 0, 0.5)


def test_merge_appends_to_existing_entry():
    store = store_of({("counterfeit", "money"): [4, 4]})
    merged = merge_into_memory(
        store, [elicited("fake", "scarf", "counterfeit money", 5)], LEXICON)
    entry = merged.entries[Bigram("counterfeit", "money")]
    assert entry.sample_size == 3
    assert entry == distribution_from_ratings([4, 4, 5])


def test_merge_skips_rejected_phrases():
    store = MemoryStore({})
    merged = merge_into_memory(store, [elicited("fake", "scarf", "lie", 5)],
                               LEXICON)
    assert len(merged) == 0


def test_merge_associative_over_concatenation():
    store = store_of({("counterfeit", "money"): [3]})
    batch_a = [elicited("fake", "scarf", "counterfeit money", 5),
               elicited("fake", "belt", "fake watch", 2)]
    batch_b = [elicited("fake", "ring", "fake watch", 4),
               elicited("fake", "ring", "counterfeit money", 1)]
    stepwise = merge_into_memory(merge_into_memory(store, batch_a, LEXICON),
                                 batch_b, LEXICON)
    at_once = merge_into_memory(store, batch_a + batch_b, LEXICON)
    assert stepwise == at_once


def test_elicited_analogy_validation():
    with pytest.raises(ValueError):
        elicited("fake", "scarf", "  ", 5)
    with pytest.raises(ValueError):
        elicited("fake", "scarf", "fake watch", 6)


def test_load_elicitations(tmp_path):
    path = write(tmp_path / "e.csv", """
        source_adjective,source_noun,analogy_text,rating
        fake,scarf,counterfeit money,5
        fake,belt,lie,2
        """)
    analogies = load_elicitations(path)
    assert len(analogies) == 2
    assert analogies[0].source_bigram == Bigram("fake", "scarf")
    assert analogies[0].rating == 5


def test_load_elicitations_bad_rating(tmp_path):
    path = write(tmp_path / "e.csv", """
        source_adjective,source_noun,analogy_text,rating
        fake,scarf,counterfeit money,9
        """)
    with pytest.raises(DatasetError, match="line 2"):
        load_elicitations(path)


def test_acceptance_summary_counts():
    analogies = [elicited("fake", "scarf", "counterfeit money", 5),
                 elicited("fake", "belt", "counterfeit money", 4),
                 elicited("fake", "ring", "fake watch", 3),
                 elicited("fake", "ring", "lie", 3),
                 elicited("fake", "sock", "fake xylophone", 3)]
    summary = acceptance_summary(analogies, LEXICON)
    assert summary["accepted_bigrams"] == 2
    assert summary["accepted_adjectives"] == 2
    assert summary["accepted_nouns"] == 2
    assert summary["rejections"] == {"wrong_arity": 1, "unknown_word": 1}
