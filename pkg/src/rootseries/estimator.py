"""Scikit-learn style wrapper around the truncated root series."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .roots import ProblemSpec, alpha_branch, taylor_table, track_root
from .validation import MAX_ORDER, check_bound, check_perturbations


class RootSeriesRegressor(BaseEstimator):
    """Predict the perturbed zero of 1 + b z^beta + sum a_i z^{gamma_i}.

    ``fit`` ignores its data: the model is fully determined by the
    parameters, and fitting only builds the Taylor table and the branch
    of alpha.  ``predict`` maps perturbation rows ``(a_1, ..., a_d)`` to
    the truncated series value.

    Parameters
    ----------
    b, beta : rational (int, Fraction, "p/q") or complex
    gammas : sequence of exponents, one per perturbation
    K : truncation order
    branch_m : which zero of the base function to expand around
    """

    def __init__(self, b=1, beta=2, gammas=(1,), K=4, branch_m=0):
        self.b = b
        self.beta = beta
        self.gammas = gammas
        self.K = K
        self.branch_m = branch_m

    def fit(self, X=None, y=None):
        check_bound("K", self.K, MAX_ORDER)
        self.spec_ = ProblemSpec(self.b, self.beta, tuple(self.gammas), self.branch_m)
        self.branch_ = alpha_branch(self.spec_)
        self.table_ = taylor_table(self.spec_, int(self.K), normalized=True)
        self.n_features_in_ = self.spec_.d
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "table_")
        arr = check_perturbations(X, self.n_features_in_)
        return np.array([self.table_.evaluate(row, self.branch_) for row in arr], dtype=complex)

    def predict_exact(self, X) -> np.ndarray:
        """Zeros found by Newton's method from alpha, for comparison with ``predict``."""
        check_is_fitted(self, "table_")
        arr = check_perturbations(X, self.n_features_in_)
        return np.array([track_root(self.spec_, row, self.branch_) for row in arr], dtype=complex)

    def score(self, X, y=None) -> float:
        """Negative largest distance between the series and the Newton-tracked zero."""
        pred = self.predict(X)
        ref = self.predict_exact(X) if y is None else np.asarray(y, dtype=complex)
        return -float(np.max(np.abs(pred - ref))) if len(pred) else 0.0
