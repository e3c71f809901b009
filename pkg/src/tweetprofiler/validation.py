"""Small input-validation helpers shared by the estimators."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .errors import ShapeError


def as_count_matrix(X) -> sp.csr_matrix:
    """Coerce ``X`` to a canonical 2-D CSR matrix of float64.

    Accepts scipy sparse matrices, dense arrays and nested sequences. A 1-D
    input is treated as a single row.
    """
    if sp.issparse(X):
        matrix = X.tocsr().astype(np.float64)
    else:
        arr = np.asarray(X, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2:
            raise ShapeError(f"expected a 2-D matrix, got ndim={arr.ndim}")
        matrix = sp.csr_matrix(arr)
    matrix.sum_duplicates()
    matrix.sort_indices()
    return matrix


def check_n_features(X: sp.csr_matrix, expected: int, context: str) -> None:
    if X.shape[1] != expected:
        raise ShapeError(
            f"{context}: expected {expected} features, got {X.shape[1]}"
        )


def check_same_length(a, b, context: str) -> None:
    if len(a) != len(b):
        raise ShapeError(f"{context}: lengths differ ({len(a)} vs {len(b)})")
