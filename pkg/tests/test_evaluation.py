import math
from collections import Counter
from fractions import Fraction

import pytest

from tweetprofiler import (
    EmptyVocabularyError,
    ParameterError,
    ShapeError,
    StratificationError,
    UndefinedMetricError,
    accuracy,
    cross_validate,
    default_synth_spec,
    generate_synthetic_corpus,
    make_folds,
    reports_to_csv,
    sweep_min_df,
)
from tweetprofiler.evaluation import CSV_HEADER
from tweetprofiler.vectorizer import fit_vocabulary


class TestAccuracy:
    def test_eight_of_ten(self):
        predicted = ["x"] * 8 + ["y"] * 2
        truth = ["x"] * 10
        assert accuracy(predicted, truth) == 0.8

    def test_all_correct(self):
        assert accuracy(["a", "b"], ["a", "b"]) == 1.0

    def test_none_correct(self):
        assert accuracy(["a", "a"], ["b", "b"]) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(ShapeError):
            accuracy(["a"], ["a", "b"])

    def test_empty_is_undefined(self):
        with pytest.raises(UndefinedMetricError):
            accuracy([], [])

    def test_matches_exact_rational_arithmetic(self):
        for matches, total in [(8, 10), (1, 3), (5, 7), (0, 9), (13, 13)]:
            predicted = ["hit"] * matches + ["miss"] * (total - matches)
            truth = ["hit"] * total
            assert accuracy(predicted, truth) == float(Fraction(matches, total))

    def test_average_of_ten_folds_summing_to_eight(self):
        from tweetprofiler.evaluation import _mean

        folds = [0.7, 0.8, 0.9, 0.8, 0.8, 0.8, 0.8, 0.8, 0.8, 0.8]
        assert math.fsum(folds) == 8.0
        assert _mean(folds) == 0.8


class TestMakeFolds:
    def test_two_balanced_classes_k5(self):
        labels = ["a"] * 5 + ["b"] * 5
        plan = make_folds(labels, k=5, seed=0)
        for fold in range(5):
            fold_labels = [labels[i] for i in plan.fold_indices(fold)]
            assert sorted(fold_labels) == ["a", "b"]

    def test_single_class_k2(self):
        plan = make_folds(["a"] * 4, k=2, seed=1)
        assert sorted(len(plan.fold_indices(f)) for f in range(2)) == [2, 2]

    def test_small_class_raises_naming_it(self):
        labels = ["big"] * 20 + ["tiny"] * 3
        with pytest.raises(StratificationError) as err:
            make_folds(labels, k=10, seed=0)
        assert "tiny" in str(err.value)

    def test_partition_and_stratification(self):
        import random

        rng = random.Random(4)
        for _ in range(25):
            k = rng.randrange(2, 6)
            labels = []
            for cls in range(rng.randrange(2, 5)):
                labels += [f"c{cls}"] * rng.randrange(k, 4 * k)
            rng.shuffle(labels)
            plan = make_folds(labels, k=k, seed=rng.randrange(100))
            assert len(plan.assignments) == len(labels)
            assert set(plan.assignments) == set(range(k))
            for cls in set(labels):
                per_fold = Counter(
                    fold for fold, label in zip(plan.assignments, labels)
                    if label == cls
                )
                counts = [per_fold.get(f, 0) for f in range(k)]
                assert max(counts) - min(counts) <= 1

    def test_deterministic_per_seed(self):
        labels = ["a"] * 12 + ["b"] * 8
        assert make_folds(labels, 4, seed=9) == make_folds(labels, 4, seed=9)
        assert make_folds(labels, 4, seed=9) != make_folds(labels, 4, seed=10)

    def test_k_below_two_rejected(self):
        with pytest.raises(ParameterError):
            make_folds(["a", "b"], k=1, seed=0)


class TestCrossValidate:
    def test_average_is_exact_mean(self, small_corpus):
        report = cross_validate(small_corpus, "gender", min_df=2, k=5, seed=0)
        assert len(report.fold_accuracies) == 5
        assert report.average_accuracy == pytest.approx(
            math.fsum(report.fold_accuracies) / 5, abs=1e-12
        )
        assert report.language == "en"
        assert report.train_time_ms >= 0

    def test_separable_corpus_is_perfect(self):
        # one dedicated token per class, emitted iff the author is in the
        # class: every task is trivially separable and CV must be perfect
        from tweetprofiler import ClassSignal, SynthSpec

        spec = SynthSpec(
            n_authors=40,
            tweets_per_author=10,
            gender_signals={
                "female": ClassSignal(("onlyfem",), 1.0),
                "male": ClassSignal(("onlymale",), 1.0),
            },
            variety_signals={
                "v0": ClassSignal(("onlyv0",), 1.0),
                "v1": ClassSignal(("onlyv1",), 1.0),
            },
            shared_vocab_size=50,
            seed=1,
        )
        corpus = generate_synthetic_corpus(spec)
        for task in ("gender", "variety"):
            report = cross_validate(corpus, task, min_df=2, k=4, seed=0)
            assert report.average_accuracy == 1.0

    def test_vocab_size_reports_full_corpus_fit(self, small_corpus):
        report = cross_validate(small_corpus, "variety", min_df=3, k=5, seed=2)
        expected = len(fit_vocabulary(small_corpus.documents(), 3))
        assert report.vocab_size == expected

    def test_no_leakage_per_fold(self, small_corpus):
        # every fold-fitted vocabulary term must clear min_df on the training
        # split alone, recounted here from scratch
        min_df, k, seed = 4, 5, 0
        labels = small_corpus.task_labels("gender")
        documents = small_corpus.documents()
        plan = make_folds(labels, k, seed)
        for fold in range(k):
            train_docs = [documents[i] for i in plan.train_indices(fold)]
            vocab = fit_vocabulary(train_docs, min_df)
            for term in vocab.terms:
                df = sum(1 for doc in train_docs if term in doc.split())
                assert df >= min_df

    def test_seed_determinism(self, small_corpus):
        a = cross_validate(small_corpus, "gender", min_df=2, k=5, seed=7)
        b = cross_validate(small_corpus, "gender", min_df=2, k=5, seed=7)
        assert a.fold_accuracies == b.fold_accuracies
        assert a.vocab_size == b.vocab_size

    def test_empty_fold_vocabulary_is_an_error(self, small_corpus):
        with pytest.raises(EmptyVocabularyError):
            cross_validate(small_corpus, "gender", min_df=10_000, k=5, seed=0)


class TestSweep:
    def test_range_shape_and_monotone_vocab(self, small_corpus):
        reports = sweep_min_df(small_corpus, "gender", df_range=(2, 7), k=5, seed=0)
        assert [r.min_df for r in reports] == list(range(2, 8))
        sizes = [r.vocab_size for r in reports]
        assert all(a >= b for a, b in zip(sizes, sizes[1:]))

    def test_single_point_range(self, small_corpus):
        reports = sweep_min_df(small_corpus, "gender", df_range=(10, 10), k=5, seed=0)
        assert len(reports) == 1 and reports[0].min_df == 10

    def test_fold_assignments_constant_across_sweep(self, small_corpus):
        labels = small_corpus.task_labels("gender")
        # the sweep shares one seed, so the plan it implies is the same object
        assert make_folds(labels, 5, seed=3) == make_folds(labels, 5, seed=3)

    def test_bad_range_rejected(self, small_corpus):
        with pytest.raises(ParameterError):
            sweep_min_df(small_corpus, "gender", df_range=(5, 2), k=5, seed=0)


class TestCsv:
    def test_layout(self, small_corpus):
        report = cross_validate(small_corpus, "gender", min_df=2, k=5, seed=0)
        text = reports_to_csv([report])
        lines = text.strip().split("\n")
        assert lines[0] == CSV_HEADER
        assert len(lines) == 1 + 5 + 1  # header + folds + summary
        summary = lines[-1].split(",")
        assert summary[3] == "avg"
        assert summary[4] == summary[5] == repr(report.average_accuracy)
        assert text.endswith("\n")
