"""RBF-kernel support vector machines trained by sequential minimal optimization.

:class:`BinaryRbfSvm` solves the standard soft-margin dual

    maximize  sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j K(x_i, x_j)
    subject to  0 <= a_i <= C,  sum_i a_i y_i = 0

with a simplified SMO loop: sweep all points, pick KKT violators, optimize one
pair analytically per step (second index chosen by the max |E_i - E_j|
heuristic with a seeded random fallback). :class:`RbfSvmClassifier` reduces
multiclass problems to one binary machine per class pair and predicts by
majority vote.
"""

from __future__ import annotations

import math
import random
import warnings
from itertools import combinations
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import ConvergenceWarning, NotFittedError

from .errors import DegenerateTrainingError, ParameterError, ShapeError
from .validation import as_count_matrix, check_n_features, check_same_length

# alpha below this is treated as zero when extracting support vectors
SUPPORT_EPS = 1e-12
# slack used to decide whether an alpha sits at a box bound
BOUND_EPS = 1e-8
# absolute safety cap on total SMO sweeps
MAX_TOTAL_SWEEPS = 10_000


def resolve_gamma(gamma, n_features: int) -> float:
    """Resolve the kernel width: 'auto' means 1 / n_features."""
    if gamma == "auto":
        if n_features < 1:
            raise ShapeError("gamma='auto' needs at least one feature")
        return 1.0 / n_features
    value = float(gamma)
    if value <= 0.0 or not math.isfinite(value):
        raise ParameterError(f"gamma must be positive, got {gamma!r}")
    return value


def rbf_kernel(x, y, gamma: float) -> float:
    """exp(-gamma * ||x - y||^2) for two sparse rows.

    The squared distance is accumulated by merging the two sorted coordinate
    lists, so identical inputs give exactly 1.0.
    """
    xr = as_count_matrix(x)
    yr = as_count_matrix(y)
    if xr.shape[0] != 1 or yr.shape[0] != 1:
        raise ShapeError("rbf_kernel expects single rows")
    if xr.shape[1] != yr.shape[1]:
        raise ShapeError(
            f"dimension mismatch: {xr.shape[1]} vs {yr.shape[1]}"
        )
    diff = xr - yr
    d2 = float(diff.multiply(diff).sum())
    return math.exp(-gamma * d2)


def rbf_gram(A, B=None, *, gamma: float) -> np.ndarray:
    """Dense RBF kernel matrix between the rows of ``A`` and ``B``.

    With ``B=None`` the symmetric Gram matrix of ``A`` is returned and its
    diagonal is exactly 1. Distances come from ||a||^2 + ||b||^2 - 2 a.b, which
    is exact for integer-valued counts.
    """
    A = as_count_matrix(A)
    if B is None:
        G = (A @ A.T).toarray().astype(np.float64)
        sq = G.diagonal().copy()
        d2 = sq[:, None] + sq[None, :] - 2.0 * G
    else:
        B = as_count_matrix(B)
        if A.shape[1] != B.shape[1]:
            raise ShapeError(
                f"dimension mismatch: {A.shape[1]} vs {B.shape[1]}"
            )
        G = (A @ B.T).toarray().astype(np.float64)
        sq_a = np.asarray(A.multiply(A).sum(axis=1), dtype=np.float64).ravel()
        sq_b = np.asarray(B.multiply(B).sum(axis=1), dtype=np.float64).ravel()
        d2 = sq_a[:, None] + sq_b[None, :] - 2.0 * G
    np.maximum(d2, 0.0, out=d2)
    return np.exp(-gamma * d2)


def _smo(
    K: np.ndarray,
    y: np.ndarray,
    C: float,
    tol: float,
    max_passes: int,
    rng: random.Random,
) -> tuple[np.ndarray, bool, int]:
    """Run SMO on a precomputed Gram matrix; returns (alpha, converged, sweeps).

    Convergence means a full sweep found no KKT violator within ``tol``.
    ``max_passes`` consecutive sweeps that find violators but cannot move any
    pair end the loop with ``converged=False``.
    """
    m = len(y)
    alpha = np.zeros(m)
    g = np.zeros(m)  # sum_j alpha_j y_j K_ij, kept incrementally
    b = 0.0

    def try_pair(i: int, j: int) -> bool:
        nonlocal b, g
        if i == j:
            return False
        e_i = g[i] + b - y[i]
        e_j = g[j] + b - y[j]
        a_i, a_j = alpha[i], alpha[j]
        s = y[i] * y[j]
        if s < 0:
            low, high = max(0.0, a_j - a_i), min(C, C + a_j - a_i)
        else:
            low, high = max(0.0, a_i + a_j - C), min(C, a_i + a_j)
        if high - low <= 1e-12:
            return False
        eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
        if eta > 1e-15:
            a_j_new = a_j + y[j] * (e_i - e_j) / eta
            a_j_new = min(high, max(low, a_j_new))
        else:
            # duplicate rows make the objective linear along the pair line
            slope = y[j] * (e_i - e_j)
            if slope > 1e-15:
                a_j_new = high
            elif slope < -1e-15:
                a_j_new = low
            else:
                return False
        if abs(a_j_new - a_j) <= 1e-12:
            return False
        a_i_new = min(C, max(0.0, a_i + s * (a_j - a_j_new)))
        d_i = a_i_new - a_i
        d_j = a_j_new - a_j
        b1 = b - e_i - y[i] * d_i * K[i, i] - y[j] * d_j * K[i, j]
        b2 = b - e_j - y[i] * d_i * K[i, j] - y[j] * d_j * K[j, j]
        if 0.0 < a_i_new < C:
            b = b1
        elif 0.0 < a_j_new < C:
            b = b2
        else:
            b = 0.5 * (b1 + b2)
        g += d_i * y[i] * K[i] + d_j * y[j] * K[j]
        alpha[i] = a_i_new
        alpha[j] = a_j_new
        return True

    def step(i: int) -> bool:
        errors = g + b - y
        scores = np.abs(errors[i] - errors)
        scores[i] = -1.0
        if try_pair(i, int(np.argmax(scores))):
            return True
        others = [j for j in range(m) if j != i]
        rng.shuffle(others)
        return any(try_pair(i, j) for j in others)

    def optimality_gap() -> float:
        # bias-free KKT check: the bias must sit above every lower bound and
        # below every upper bound on y_i - g_i; a gap <= 2*tol means some bias
        # satisfies every point's condition within tol.
        r = y - g
        at_zero = alpha <= SUPPORT_EPS
        at_c = alpha >= C - SUPPORT_EPS
        non_bound = ~(at_zero | at_c)
        lower = (at_zero & (y > 0)) | (at_c & (y < 0)) | non_bound
        upper = (at_zero & (y < 0)) | (at_c & (y > 0)) | non_bound
        if not lower.any() or not upper.any():
            return -np.inf
        return float(r[lower].max() - r[upper].min())

    converged = False
    sweeps = 0
    stalled = 0
    while sweeps < MAX_TOTAL_SWEEPS:
        sweeps += 1
        violators = 0
        changed = 0
        for i in range(m):
            r = y[i] * (g[i] + b - y[i])
            if (r < -tol and alpha[i] < C) or (r > tol and alpha[i] > 0.0):
                violators += 1
                if step(i):
                    changed += 1
        if violators == 0 or optimality_gap() <= 2.0 * tol:
            converged = True
            break
        if changed == 0:
            stalled += 1
            if stalled >= max_passes:
                break
        else:
            stalled = 0
    return alpha, converged, sweeps


def _final_bias(alpha: np.ndarray, y: np.ndarray, g: np.ndarray, C: float) -> float:
    """Bias from the average over non-bound support vectors, else bound midpoint."""
    r = y - g
    at_zero = alpha <= BOUND_EPS
    at_c = alpha >= C - BOUND_EPS
    non_bound = ~(at_zero | at_c)
    if non_bound.any():
        return float(r[non_bound].mean())
    lower = (at_zero & (y > 0)) | (at_c & (y < 0))
    upper = (at_zero & (y < 0)) | (at_c & (y > 0))
    lo = float(r[lower].max()) if lower.any() else None
    hi = float(r[upper].min()) if upper.any() else None
    if lo is None and hi is None:
        return 0.0
    if lo is None:
        return hi
    if hi is None:
        return lo
    return 0.5 * (lo + hi)


class BinaryRbfSvm(BaseEstimator):
    """Two-class RBF-kernel SVM trained by SMO.

    Parameters
    ----------
    C : float, default=1.0
        Box constraint of the dual problem.
    gamma : 'auto' or float, default='auto'
        Kernel width; 'auto' resolves to 1 / n_features at fit time.
    tol : float, default=1e-3
        KKT tolerance used as the convergence criterion.
    max_passes : int, default=200
        Consecutive sweeps without progress before giving up.
    seed : int, default=0
        Seed for the randomized second-choice fallback.

    After ``fit`` the two class labels are stored sorted in ``label_pair_``;
    the first one plays the role of the positive class, so a positive decision
    value predicts ``label_pair_[0]``.
    """

    def __init__(self, C: float = 1.0, gamma="auto", tol: float = 1e-3,
                 max_passes: int = 200, seed: int = 0):
        self.C = C
        self.gamma = gamma
        self.tol = tol
        self.max_passes = max_passes
        self.seed = seed

    def fit(self, X, y: Sequence):
        if self.C <= 0:
            raise ParameterError(f"C must be positive, got {self.C}")
        X = as_count_matrix(X)
        labels = np.asarray(list(y), dtype=object)
        check_same_length(range(X.shape[0]), labels, "fit")
        classes = sorted(set(labels.tolist()))
        if len(classes) != 2:
            raise DegenerateTrainingError(
                f"binary training needs exactly 2 classes, got {len(classes)}"
            )
        if X.shape[0] < 2:
            raise DegenerateTrainingError("need at least 2 training rows")

        ysign = np.where(labels == classes[0], 1.0, -1.0)
        gamma = resolve_gamma(self.gamma, X.shape[1])
        K = rbf_gram(X, gamma=gamma)
        rng = random.Random(self.seed)
        alpha, converged, sweeps = _smo(
            K, ysign, float(self.C), self.tol, self.max_passes, rng
        )

        mask = alpha > SUPPORT_EPS
        if not mask.any():
            raise DegenerateTrainingError("training produced no support vectors")
        g = K @ (alpha * ysign)
        self.label_pair_ = (classes[0], classes[1])
        self.classes_ = np.asarray(classes, dtype=object)
        self.gamma_ = gamma
        self.support_ = np.flatnonzero(mask)
        self.support_vectors_ = X[mask]
        self.dual_coef_ = (alpha * ysign)[mask]
        self.intercept_ = _final_bias(alpha, ysign, g, float(self.C))
        self.converged_ = converged
        self.n_iter_ = sweeps
        self.n_features_in_ = X.shape[1]
        if not converged:
            warnings.warn(
                f"SMO did not satisfy the KKT conditions within tol={self.tol} "
                f"after {sweeps} sweeps; model kept with converged_=False",
                ConvergenceWarning,
                stacklevel=2,
            )
        return self

    def decision_function(self, X) -> np.ndarray:
        self._check_fitted()
        X = as_count_matrix(X)
        check_n_features(X, self.n_features_in_, "decision_function")
        Kx = rbf_gram(self.support_vectors_, X, gamma=self.gamma_)
        return self.dual_coef_ @ Kx + self.intercept_

    def predict(self, X) -> np.ndarray:
        decisions = self.decision_function(X)
        pos, neg = self.label_pair_
        return np.asarray([pos if d >= 0 else neg for d in decisions], dtype=object)

    def _check_fitted(self) -> None:
        if not hasattr(self, "dual_coef_"):
            raise NotFittedError("this BinaryRbfSvm is not fitted yet; call fit first")


def resolve_votes(votes: np.ndarray, margins: np.ndarray) -> int:
    """Index of the winning class: most votes, then largest accumulated
    decision magnitude, then lowest class index."""
    best = 0
    for idx in range(1, len(votes)):
        if (votes[idx], margins[idx]) > (votes[best], margins[best]):
            best = idx
    return best


class RbfSvmClassifier(BaseEstimator, ClassifierMixin):
    """One-vs-one multiclass SVM built from :class:`BinaryRbfSvm` machines.

    One machine is trained per unordered class pair, in lexicographic pair
    order, each on only that pair's rows. Prediction lets every machine vote
    for the pair member its decision sign favors.
    """

    def __init__(self, C: float = 1.0, gamma="auto", tol: float = 1e-3,
                 max_passes: int = 200, seed: int = 0):
        self.C = C
        self.gamma = gamma
        self.tol = tol
        self.max_passes = max_passes
        self.seed = seed

    def fit(self, X, y: Sequence):
        X = as_count_matrix(X)
        labels = np.asarray(list(y), dtype=object)
        check_same_length(range(X.shape[0]), labels, "fit")
        classes = sorted(set(labels.tolist()))
        if len(classes) < 2:
            raise DegenerateTrainingError(
                f"need at least 2 classes, got {len(classes)}"
            )

        self.classes_ = np.asarray(classes, dtype=object)
        self.class_pairs_ = list(combinations(classes, 2))
        self.machines_ = []
        for idx, (first, second) in enumerate(self.class_pairs_):
            mask = (labels == first) | (labels == second)
            machine = BinaryRbfSvm(
                C=self.C,
                gamma=self.gamma,
                tol=self.tol,
                max_passes=self.max_passes,
                seed=self.seed * 1_000_003 + idx,
            )
            machine.fit(X[mask], labels[mask])
            self.machines_.append(machine)
        self.converged_ = all(machine.converged_ for machine in self.machines_)
        self.n_features_in_ = X.shape[1]
        return self

    def pairwise_decisions(self, X) -> np.ndarray:
        """Decision values of every machine, one column per class pair."""
        self._check_fitted()
        X = as_count_matrix(X)
        check_n_features(X, self.n_features_in_, "pairwise_decisions")
        return np.column_stack(
            [machine.decision_function(X) for machine in self.machines_]
        )

    def predict(self, X) -> np.ndarray:
        decisions = self.pairwise_decisions(X)
        n_samples = decisions.shape[0]
        n_classes = len(self.classes_)
        class_index = {cls: idx for idx, cls in enumerate(self.classes_)}
        votes = np.zeros((n_samples, n_classes), dtype=np.int64)
        margins = np.zeros((n_samples, n_classes))
        for k, (first, second) in enumerate(self.class_pairs_):
            column = decisions[:, k]
            wins_first = column >= 0
            fi, si = class_index[first], class_index[second]
            votes[wins_first, fi] += 1
            votes[~wins_first, si] += 1
            margins[wins_first, fi] += np.abs(column[wins_first])
            margins[~wins_first, si] += np.abs(column[~wins_first])
        winners = [
            self.classes_[resolve_votes(votes[s], margins[s])]
            for s in range(n_samples)
        ]
        return np.asarray(winners, dtype=object)

    def _check_fitted(self) -> None:
        if not hasattr(self, "machines_"):
            raise NotFittedError(
                "this RbfSvmClassifier is not fitted yet; call fit first"
            )
