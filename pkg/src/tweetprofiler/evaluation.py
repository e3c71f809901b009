"""Stratified cross-validation, accuracy metrics and the min-df sweep harness.

Each fold refits the vocabulary on its training split only; test rows are
transformed against that vocabulary, so no document-frequency information
leaks from the held-out authors. The reported ``vocab_size`` is the separate
full-corpus vocabulary size (the number a single fit on all authors gives).
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import Corpus
from .errors import ParameterError, ShapeError, StratificationError, UndefinedMetricError
from .svm import RbfSvmClassifier
from .vectorizer import DocumentTermVectorizer, fit_vocabulary

CSV_HEADER = "language,task,min_df,fold,accuracy,average_accuracy,vocab_size,train_time_ms"


@dataclass(frozen=True)
class FoldPlan:
    """Fold id per author index, stratified by class."""

    k: int
    assignments: tuple[int, ...]
    seed: int

    def fold_indices(self, fold: int) -> list[int]:
        return [i for i, f in enumerate(self.assignments) if f == fold]

    def train_indices(self, fold: int) -> list[int]:
        return [i for i, f in enumerate(self.assignments) if f != fold]


@dataclass(frozen=True)
class EvalReport:
    """Result of one cross-validated run at one min_df value."""

    task: str
    language: str
    min_df: int
    fold_accuracies: tuple[float, ...]
    average_accuracy: float
    vocab_size: int
    train_time_ms: int


def accuracy(predicted: Sequence, truth: Sequence) -> float:
    """Fraction of predictions matching the truth."""
    if len(predicted) != len(truth):
        raise ShapeError(
            f"prediction/truth length mismatch: {len(predicted)} vs {len(truth)}"
        )
    if len(truth) == 0:
        raise UndefinedMetricError("accuracy is undefined for empty inputs")
    matches = sum(1 for p, t in zip(predicted, truth) if p == t)
    return matches / len(truth)


def make_folds(labels: Sequence[str], k: int, seed: int = 0) -> FoldPlan:
    """Assign authors to ``k`` stratified folds, deterministically for a seed.

    Within each class the (shuffled) members are dealt out consecutively
    modulo k, so per-class fold counts differ by at most one; the dealing
    offset carries over between classes to balance total fold sizes.
    """
    if k < 2:
        raise ParameterError(f"k must be >= 2, got {k}")
    rng = random.Random(seed)
    assignments = [0] * len(labels)
    offset = 0
    for cls in sorted(set(labels)):
        members = [i for i, label in enumerate(labels) if label == cls]
        if len(members) < k:
            raise StratificationError(
                f"class {cls!r} has {len(members)} members, fewer than k={k}"
            )
        rng.shuffle(members)
        for j, index in enumerate(members):
            assignments[index] = (offset + j) % k
        offset = (offset + len(members)) % k
    return FoldPlan(k=k, assignments=tuple(assignments), seed=seed)


def _mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values)


def cross_validate(
    corpus: Corpus,
    task: str,
    min_df: int = 10,
    C: float = 1.0,
    gamma="auto",
    k: int = 10,
    seed: int = 0,
    lowercase: bool = False,
) -> EvalReport:
    """Stratified k-fold cross-validation of one task on one corpus."""
    labels = corpus.task_labels(task)
    documents = corpus.documents()
    plan = make_folds(labels, k, seed)

    # full-corpus vocabulary size, reported alongside the leakage-free folds
    vocab_size = len(fit_vocabulary(documents, min_df, lowercase))

    fold_accuracies = []
    train_seconds = 0.0
    for fold in range(k):
        train_idx = plan.train_indices(fold)
        test_idx = plan.fold_indices(fold)
        train_docs = [documents[i] for i in train_idx]
        train_labels = [labels[i] for i in train_idx]
        test_docs = [documents[i] for i in test_idx]
        test_labels = [labels[i] for i in test_idx]

        vectorizer = DocumentTermVectorizer(min_df=min_df, lowercase=lowercase)
        X_train = vectorizer.fit(train_docs).transform(train_docs)
        X_test = vectorizer.transform(test_docs)

        model = RbfSvmClassifier(C=C, gamma=gamma, seed=seed)
        started = time.perf_counter()
        model.fit(X_train, train_labels)
        train_seconds += time.perf_counter() - started

        fold_accuracies.append(accuracy(model.predict(X_test), test_labels))

    return EvalReport(
        task=task,
        language=corpus.language,
        min_df=min_df,
        fold_accuracies=tuple(fold_accuracies),
        average_accuracy=_mean(fold_accuracies),
        vocab_size=vocab_size,
        train_time_ms=round(train_seconds * 1000),
    )


def sweep_min_df(
    corpus: Corpus,
    task: str,
    df_range: tuple[int, int] = (2, 25),
    C: float = 1.0,
    gamma="auto",
    k: int = 10,
    seed: int = 0,
    lowercase: bool = False,
) -> list[EvalReport]:
    """Cross-validate at every min_df in the inclusive range, ascending.

    The seed is shared across sweep points, so fold assignments stay constant
    and only the representation changes between reports.
    """
    low, high = df_range
    if low < 1 or high < low:
        raise ParameterError(f"invalid df range {low}..{high}")
    return [
        cross_validate(
            corpus, task, min_df=df, C=C, gamma=gamma, k=k, seed=seed,
            lowercase=lowercase,
        )
        for df in range(low, high + 1)
    ]


def reports_to_csv(reports: Iterable[EvalReport]) -> str:
    """Render reports as CSV: one row per fold plus one 'avg' summary row each."""
    lines = [CSV_HEADER]
    for report in reports:
        prefix = f"{report.language},{report.task},{report.min_df}"
        suffix = f"{report.vocab_size},{report.train_time_ms}"
        for fold, acc in enumerate(report.fold_accuracies):
            lines.append(
                f"{prefix},{fold},{acc},{report.average_accuracy},{suffix}"
            )
        lines.append(
            f"{prefix},avg,{report.average_accuracy},{report.average_accuracy},{suffix}"
        )
    return "\n".join(lines) + "\n"
