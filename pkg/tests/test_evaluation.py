import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bigram_analogy.corpus import Bigram, RatingDistribution, \
    distribution_from_ratings
from bigram_analogy.evaluation import (EvaluationError, MIN_P, baseline_majority,
                                       baseline_random, baseline_uniform,
                                       default_subsets, estimate_analogy_difficulty,
                                       evaluate, holm_bonferroni,
                                       human_resample_reference, js_divergence,
                                       ks_test, ols_r2, run_baseline,
                                       within_1sd_accuracy, UNIFORM)
from bigram_analogy.model import Prediction, NULL_FALLBACK
from bigram_analogy.similarity import load_taxonomy_tsv
from conftest import record


def point_mass(rating, n=4):
    probs = [0.0] * 5
    probs[rating - 1] = 1.0
    return RatingDistribution(tuple(probs), n)


prob_vectors = st.lists(st.floats(0.001, 1.0), min_size=5, max_size=5).map(
    lambda ws: RatingDistribution(tuple(w / sum(ws) for w in ws), 12))


# ---------------------------------------------------------------------------
# JS divergence

def test_jsd_identity():
    d = distribution_from_ratings([1, 3, 3, 5])
    assert js_divergence(d, d) == 0.0


def test_jsd_disjoint_point_masses():
    assert js_divergence(point_mass(1), point_mass(5)) == pytest.approx(1.0)


def test_jsd_uniform_vs_point_mass():
    # 0.6100 from a direct hand evaluation of the base-2 definition
    assert js_divergence(UNIFORM, point_mass(1)) == pytest.approx(0.6100, abs=5e-4)


@given(prob_vectors, prob_vectors)
def test_jsd_symmetry_and_bounds(p, q):
    a, b = js_divergence(p, q), js_divergence(q, p)
    assert abs(a - b) < 1e-12
    assert 0.0 <= a <= 1.0


@given(prob_vectors)
def test_jsd_zero_iff_equal(p):
    assert js_divergence(p, p) == pytest.approx(0.0, abs=1e-12)
    shifted = RatingDistribution(tuple(p.probs[1:] + p.probs[:1]), p.sample_size)
    if shifted.probs != p.probs:
        assert js_divergence(p, shifted) > 0


# ---------------------------------------------------------------------------
# KS test

def test_ks_perfect_match():
    d, p = ks_test([5, 5, 5, 5], point_mass(5))
    assert d == 0.0
    assert p == 1.0


def test_ks_maximal_separation():
    d, _ = ks_test([5, 5, 5, 5], point_mass(1))
    assert d == 1.0


def test_ks_hand_cdf_case():
    # ECDF steps 2/12,4/12,6/12,8/12,1 vs uniform 0.2..1.0; max gap at bin 4
    ratings = [1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 5, 5]
    d, p = ks_test(ratings, UNIFORM)
    expected = max(abs(sum(1 for r in ratings if r <= v) / 12 - 0.2 * v)
                   for v in range(1, 6))
    assert d == pytest.approx(expected)
    assert d == pytest.approx(2 / 15)
    assert 0 < p <= 1


def test_ks_null_prediction():
    d, p = ks_test([1, 2, 3], None)
    assert d == 1.0
    assert p == MIN_P


def test_ks_empty_ratings():
    with pytest.raises(EvaluationError):
        ks_test([], point_mass(3))


@given(st.lists(st.integers(1, 5), min_size=1, max_size=20), prob_vectors)
def test_ks_statistic_bounds(ratings, predicted):
    d, p = ks_test(ratings, predicted)
    assert 0.0 <= d <= 1.0
    assert 0.0 < p <= 1.0


# ---------------------------------------------------------------------------
# Holm-Bonferroni

def test_holm_empty():
    assert holm_bonferroni([]) == []


def test_holm_all_ones():
    assert holm_bonferroni([1.0, 1.0]) == [False, False]


def test_holm_hand_case():
    # 0.01 <= 0.05/3 rejects; 0.03 > 0.05/2 stops the step-down
    assert holm_bonferroni([0.01, 0.04, 0.03], 0.05) == [True, False, False]


def test_holm_alpha_validation():
    with pytest.raises(EvaluationError):
        holm_bonferroni([0.5], alpha=0.0)


@given(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=20),
       st.integers(0, 19), st.floats(0.01, 0.99))
def test_holm_monotone_and_dominates_bonferroni(p_values, index, factor):
    flags = holm_bonferroni(p_values, 0.05)
    # lowering any single p-value never un-rejects another hypothesis
    lowered = list(p_values)
    lowered[index % len(p_values)] *= factor
    flags_lowered = holm_bonferroni(lowered, 0.05)
    for i, was_rejected in enumerate(flags):
        if i != index % len(p_values) and was_rejected:
            assert flags_lowered[i]
    # Holm rejects a superset of plain Bonferroni
    m = len(p_values)
    for p, flag in zip(p_values, flags):
        if p <= 0.05 / m:
            assert flag


# ---------------------------------------------------------------------------
# Within-1-SD accuracy

def test_within_1sd_zero_width_band():
    gold = point_mass(5, n=12)
    assert within_1sd_accuracy(5.0, gold)
    assert not within_1sd_accuracy(4.0, gold)


def test_within_1sd_wide_band():
    # mu = 4.2, sigma ~ 0.75: band rounds to [3, 5]
    gold = RatingDistribution((0, 0, 0.2, 0.4, 0.4), 10)
    assert gold.mean() == pytest.approx(4.2)
    assert within_1sd_accuracy(3.0, gold)
    assert within_1sd_accuracy(5.0, gold)
    assert not within_1sd_accuracy(2.0, gold)


def test_within_1sd_requires_two_samples():
    with pytest.raises(EvaluationError):
        within_1sd_accuracy(3.0, point_mass(3, n=1))


def test_within_1sd_rejects_out_of_scale_mean():
    with pytest.raises(EvaluationError):
        within_1sd_accuracy(5.5, point_mass(3, n=12))


@given(prob_vectors)
def test_within_1sd_sigma_zero_accepts_only_rounded_mean(gold):
    # sigma = 0 only for point masses; band then contains exactly one integer
    for rating in range(1, 6):
        pm = point_mass(rating, n=12)
        accepted = [v for v in range(1, 6) if within_1sd_accuracy(float(v), pm)]
        assert accepted == [rating]


# ---------------------------------------------------------------------------
# Baselines

def records_fixture():
    return [
        record("fake", "watch", "privative", 900, [3, 3, 4, 4]),
        record("fake", "reef", "privative", 0, [1, 2, 1, 2]),
        record("tiny", "watch", "subsective", 700, [5, 5, 5, 5]),
        record("tiny", "reef", "subsective", 0, [4, 5, 4, 5]),
    ]


def test_baseline_uniform_distribution():
    (p,) = run_baseline(baseline_uniform(), records_fixture()[:1])
    assert p.distribution.probs == (0.2,) * 5


def test_baseline_majority_means():
    preds = run_baseline(baseline_majority(), records_fixture())
    by_bigram = {p.bigram: p for p in preds}
    assert by_bigram[Bigram("fake", "watch")].distribution.mean() == 3
    assert by_bigram[Bigram("tiny", "watch")].distribution.mean() == 5


def test_baseline_random_reproducible():
    records = records_fixture()
    a = run_baseline(baseline_random(seed=42), records)
    b = run_baseline(baseline_random(seed=42), list(reversed(records)))
    assert {p.bigram: p for p in a} == {p.bigram: p for p in b}
    c = run_baseline(baseline_random(seed=43), records)
    assert any(x != y for x, y in zip(a, c))


def test_human_resample_point_mass_is_zero():
    records = [record("fake", "watch", "privative", 10, [5, 5, 5, 5])]
    assert human_resample_reference(records, repetitions=50, seed=0) == 0.0


def test_human_resample_matches_enumeration_oracle():
    # n=2 per bigram: enumerate all resample outcomes exactly and compare
    records = [record("fake", "watch", "privative", 10, [1, 5]),
               record("tiny", "watch", "subsective", 10, [4, 5])]
    expected_total = 0.0
    for rec in records:
        probs = rec.distribution.probs
        expected = 0.0
        for outcome in itertools.product(range(1, 6), repeat=2):
            weight = probs[outcome[0] - 1] * probs[outcome[1] - 1]
            if weight == 0:
                continue
            expected += weight * js_divergence(
                distribution_from_ratings(list(outcome)), rec.distribution)
        expected_total += expected
    expected_mean = expected_total / len(records)
    estimate = human_resample_reference(records, repetitions=20000, seed=1)
    assert estimate == pytest.approx(expected_mean, abs=0.01)


def test_human_resample_requires_multiple_ratings():
    with pytest.raises(EvaluationError):
        human_resample_reference([record("fake", "watch", "privative", 1, [5])])


# ---------------------------------------------------------------------------
# OLS

def test_ols_exact_line():
    slope, intercept, r2, p = ols_r2([1, 2, 3, 4], [3, 5, 7, 9])
    assert slope == pytest.approx(2.0)
    assert intercept == pytest.approx(1.0)
    assert r2 == pytest.approx(1.0)
    assert p == 0.0


def test_ols_constant_y():
    _, _, r2, _ = ols_r2([1, 2, 3, 4], [2, 2, 2, 2])
    assert r2 == 0.0


def test_ols_hand_case():
    # slope 4.5/5 = 0.9; R^2 frozen from two independent computations
    # (normal equations by hand and scipy.stats.linregress): 0.85263
    slope, intercept, r2, p = ols_r2([1, 2, 3, 4], [1, 2, 2, 4])
    assert slope == pytest.approx(0.9)
    assert intercept == pytest.approx(0.0, abs=1e-12)
    assert r2 == pytest.approx(0.852631578947, abs=1e-9)
    assert p == pytest.approx(0.0766194831233612, abs=1e-9)


def test_ols_errors():
    with pytest.raises(EvaluationError):
        ols_r2([1, 1, 1], [1, 2, 3])
    with pytest.raises(EvaluationError):
        ols_r2([1, 2], [1, 2, 3])
    with pytest.raises(EvaluationError):
        ols_r2([1, 2], [1, 2])


# ---------------------------------------------------------------------------
# Difficulty heuristics

@pytest.fixture
def difficulty_taxonomy(tmp_path):
    from conftest import write
    return load_taxonomy_tsv(write(tmp_path / "t.tsv", """
        root\t\tentity
        accessory\troot\taccessory
        watch.n\taccessory\twatch
        purse.n\taccessory\tpurse
        scarf.n\taccessory\tscarf
        lonely.n\troot\tisland
        """))


def test_difficulty_no_neighbors(difficulty_taxonomy):
    records = [record("fake", "island", "privative", 0, [3, 3]),
               record("fake", "watch", "privative", 900, [5, 5])]
    flags = estimate_analogy_difficulty(
        records[0], records, difficulty_taxonomy,
        {"island": 1, "watch": 900}, threshold=0.6)
    assert flags.no_high_freq_neighbor
    assert not flags.conflicting_convergent_neighbors
    assert not flags.nonconvergent_neighbors


def test_difficulty_conflicting_convergent_neighbors(difficulty_taxonomy):
    records = [record("fake", "scarf", "privative", 0, [3, 3]),
               record("fake", "watch", "privative", 900, [1, 1, 1, 2]),   # mu 1.25
               record("fake", "purse", "privative", 800, [5, 5, 5, 4])]   # mu 4.75
    flags = estimate_analogy_difficulty(
        records[0], records, difficulty_taxonomy,
        {"scarf": 10, "watch": 900, "purse": 800})
    assert flags.conflicting_convergent_neighbors
    assert not flags.nonconvergent_neighbors
    assert not flags.no_high_freq_neighbor


def test_difficulty_nonconvergent_neighbors(difficulty_taxonomy):
    records = [record("fake", "scarf", "privative", 0, [3, 3]),
               record("fake", "watch", "privative", 900, [3, 3])]  # mu 3.0
    flags = estimate_analogy_difficulty(
        records[0], records, difficulty_taxonomy, {"scarf": 10, "watch": 900})
    assert flags.nonconvergent_neighbors
    assert not flags.conflicting_convergent_neighbors


def test_difficulty_unknown_noun(difficulty_taxonomy):
    records = [record("fake", "xyzzy", "privative", 0, [3, 3])]
    with pytest.raises(Exception):
        estimate_analogy_difficulty(records[0], records, difficulty_taxonomy,
                                    {"xyzzy": 1})


# ---------------------------------------------------------------------------
# Report assembly

def perfect_predictions(records):
    return [Prediction(r.bigram, r.distribution, "analogy",
                       ((r.bigram, 1.0),)) for r in records]


def test_evaluate_perfect_predictions():
    records = records_fixture()
    report = evaluate(perfect_predictions(records), records)
    assert report.aggregates["total_js"] == 0.0
    assert report.aggregates["within_1sd_accuracy"] == 1.0
    assert report.aggregates["significant_count"] == 0


def test_evaluate_all_null():
    records = records_fixture()
    preds = [Prediction(r.bigram, None, NULL_FALLBACK) for r in records]
    report = evaluate(preds, records)
    assert report.aggregates["total_js"] == 1.0
    assert report.aggregates["within_1sd_accuracy"] == 0.0


def test_evaluate_subset_aggregates_recompute():
    records = records_fixture()
    training = frozenset({Bigram("fake", "watch"), Bigram("tiny", "watch")})
    preds = run_baseline(baseline_uniform(), records)
    report = evaluate(preds, records, default_subsets(training))
    per = report.per_bigram
    zero = [b for b in per if b.noun == "reef"]
    assert report.aggregates["zero_freq_js"] == pytest.approx(
        np.mean([per[b].js for b in zero]))
    privative = [b for b in per if b.adjective == "fake"]
    assert report.aggregates["privative_js"] == pytest.approx(
        np.mean([per[b].js for b in privative]))
    novel = [b for b in per if b not in training]
    assert report.aggregates["novel_js"] == pytest.approx(
        np.mean([per[b].js for b in novel]))
    assert report.aggregates["total_js"] == pytest.approx(
        np.mean([s.js for s in per.values()]))
    assert report.aggregates["significant_count"] == sum(
        s.ks_significant for s in per.values())


def test_evaluate_misaligned_inputs():
    records = records_fixture()
    preds = perfect_predictions(records)[:-1]
    with pytest.raises(EvaluationError):
        evaluate(preds, records)


def test_evaluate_each_bigram_once():
    records = records_fixture()
    report = evaluate(perfect_predictions(records), records)
    assert sorted(report.per_bigram) == sorted(r.bigram for r in records)
