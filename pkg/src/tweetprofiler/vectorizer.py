"""Bag-of-words vectorization with a minimum-document-frequency gate.

Documents are tokenized on whitespace only (no case folding, no token
filtering), a vocabulary is built from terms whose document frequency is at
least ``min_df``, and documents become sparse rows of raw term counts. The
resulting authors-by-terms count matrix is the representation fed to the
classifier.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .errors import (
    ConsistencyError,
    EmptyVocabularyError,
    ParameterError,
    ShapeError,
)


def tokenize(text: str, lowercase: bool = False) -> list[str]:
    """Split ``text`` on runs of Unicode whitespace; no other normalization."""
    if lowercase:
        text = text.lower()
    return text.split()


@dataclass(frozen=True)
class Vocabulary:
    """Ordered term-to-column map with per-term document frequencies.

    Terms are sorted lexicographically so column ids are reproducible; every
    retained term has ``doc_freq[term] >= min_df``.
    """

    terms: tuple[str, ...]
    index: Mapping[str, int]
    doc_freq: Mapping[str, int]
    min_df: int

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.index


def fit_vocabulary(
    documents: Sequence[str], min_df: int, lowercase: bool = False
) -> Vocabulary:
    """Build the vocabulary of terms appearing in at least ``min_df`` documents."""
    if min_df < 1:
        raise ParameterError(f"min_df must be >= 1, got {min_df}")
    documents = list(documents)
    if not documents:
        raise ParameterError("at least one document is required")

    doc_freq: Counter[str] = Counter()
    for document in documents:
        doc_freq.update(set(tokenize(document, lowercase)))

    terms = tuple(sorted(t for t, df in doc_freq.items() if df >= min_df))
    if not terms:
        raise EmptyVocabularyError(
            f"min_df={min_df} prunes every term "
            f"({len(doc_freq)} distinct tokens in {len(documents)} documents)"
        )
    index = {term: column for column, term in enumerate(terms)}
    return Vocabulary(
        terms=terms,
        index=index,
        doc_freq={term: doc_freq[term] for term in terms},
        min_df=min_df,
    )


def count_rows(
    documents: Iterable[str], vocab: Vocabulary, lowercase: bool = False
) -> sp.csr_matrix:
    """Count vocabulary terms per document; out-of-vocabulary tokens are dropped."""
    if len(vocab) == 0:
        raise EmptyVocabularyError("cannot transform with an empty vocabulary")
    index = vocab.index
    indptr = [0]
    indices: list[int] = []
    data: list[int] = []
    n_docs = 0
    for document in documents:
        n_docs += 1
        counts = Counter(tokenize(document, lowercase))
        row = sorted(
            (index[token], count) for token, count in counts.items() if token in index
        )
        indices.extend(column for column, _ in row)
        data.extend(count for _, count in row)
        indptr.append(len(indices))
    return sp.csr_matrix(
        (
            np.asarray(data, dtype=np.int64),
            np.asarray(indices, dtype=np.int32),
            np.asarray(indptr, dtype=np.int32),
        ),
        shape=(n_docs, len(vocab)),
    )


class DocumentTermVectorizer(BaseEstimator, TransformerMixin):
    """Fit a min-df-gated vocabulary and transform documents to count rows.

    Parameters
    ----------
    min_df : int, default=10
        Minimum number of documents a term must occur in to be kept.
    lowercase : bool, default=False
        Lowercase text before tokenizing. Off by default: tokens are raw
        whitespace-delimited strings.
    """

    def __init__(self, min_df: int = 10, lowercase: bool = False):
        self.min_df = min_df
        self.lowercase = lowercase

    def fit(self, raw_documents: Sequence[str], y=None):
        self.vocabulary_ = fit_vocabulary(raw_documents, self.min_df, self.lowercase)
        self.n_features_ = len(self.vocabulary_)
        return self

    def transform(self, raw_documents: Iterable[str]) -> sp.csr_matrix:
        self._check_fitted()
        return count_rows(raw_documents, self.vocabulary_, self.lowercase)

    def get_feature_names_out(self, input_features=None) -> np.ndarray:
        self._check_fitted()
        return np.asarray(self.vocabulary_.terms, dtype=object)

    @classmethod
    def from_vocabulary(cls, vocab: Vocabulary, lowercase: bool = False):
        """Rebuild a fitted vectorizer around an existing vocabulary."""
        vectorizer = cls(min_df=vocab.min_df, lowercase=lowercase)
        vectorizer.vocabulary_ = vocab
        vectorizer.n_features_ = len(vocab)
        return vectorizer

    def _check_fitted(self) -> None:
        if not hasattr(self, "vocabulary_"):
            raise NotFittedError(
                "this DocumentTermVectorizer is not fitted yet; call fit first"
            )


def top_terms_by_class(
    X: sp.csr_matrix,
    vocab: Vocabulary,
    labels: Sequence[str],
    k: int,
) -> tuple[dict[str, list[tuple[str, int]]], dict[str, dict[str, int]]]:
    """Rank terms by summed count within each class.

    Returns a per-class list of the ``k`` highest-total-count terms (ties
    broken lexicographically, zero-count terms omitted) and, when there are
    at least two classes, the terms common to every class's top-k list with
    each class's total count for them.
    """
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if X.shape[0] != len(labels):
        raise ShapeError(
            f"matrix has {X.shape[0]} rows but {len(labels)} labels were given"
        )
    if X.shape[1] != len(vocab):
        raise ShapeError(
            f"matrix has {X.shape[1]} columns but vocabulary has {len(vocab)} terms"
        )
    if any(label is None or label == "" for label in labels):
        raise ConsistencyError("every row must be labeled")

    label_array = np.asarray(labels, dtype=object)
    classes = sorted(set(labels))
    per_class: dict[str, list[tuple[str, int]]] = {}
    for cls in classes:
        totals = np.asarray(
            X[label_array == cls].sum(axis=0), dtype=np.int64
        ).ravel()
        ranked = sorted(
            ((vocab.terms[col], int(count)) for col, count in enumerate(totals) if count > 0),
            key=lambda item: (-item[1], item[0]),
        )
        per_class[cls] = ranked[:k]

    common: dict[str, dict[str, int]] = {}
    if len(classes) >= 2:
        shared = set(term for term, _ in per_class[classes[0]])
        for cls in classes[1:]:
            shared &= {term for term, _ in per_class[cls]}
        counts_by_class = {
            cls: dict(per_class[cls]) for cls in classes
        }
        for term in sorted(shared):
            common[term] = {cls: counts_by_class[cls][term] for cls in classes}
    return per_class, common


def vocabulary_to_lines(vocab: Vocabulary) -> list[str]:
    """Serialize a vocabulary as a min_df header plus one term/column/df line each."""
    lines = [f"min_df {vocab.min_df}"]
    for column, term in enumerate(vocab.terms):
        lines.append(f"{term} {column} {vocab.doc_freq[term]}")
    return lines


def vocabulary_from_lines(lines: Sequence[str]) -> Vocabulary:
    """Inverse of :func:`vocabulary_to_lines`."""
    if not lines or not lines[0].startswith("min_df "):
        raise ParameterError("vocabulary text must start with a 'min_df' header")
    min_df = int(lines[0].split()[1])
    terms: list[str] = []
    doc_freq: dict[str, int] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 3:
            raise ParameterError(f"vocabulary line {lineno}: expected 'term column df'")
        term, column, df = parts[0], int(parts[1]), int(parts[2])
        if column != len(terms):
            raise ParameterError(
                f"vocabulary line {lineno}: column {column} out of order"
            )
        terms.append(term)
        doc_freq[term] = df
    index = {term: column for column, term in enumerate(terms)}
    return Vocabulary(
        terms=tuple(terms), index=index, doc_freq=doc_freq, min_df=min_df
    )
