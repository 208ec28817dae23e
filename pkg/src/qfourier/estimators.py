"""scikit-learn style wrappers around the block-map flow and the Ising phase diagram.

Rows of ``X`` are coefficient vectors of 2-boxes (for ``BlockMapFlow``) or
inverse temperatures (for ``IsingPhaseClassifier``).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .algebra import Shading, TwoBox
from .biprojection import enumerate_biprojections
from .blockmap import STEP_TOL, LimitKind, iterate
from .groups import group_from_spec
from .ising import Phase, classify_beta, critical_beta


class BlockMapFlow(TransformerMixin, BaseEstimator):
    """Run B_lambda to its limit for each row of X.

    ``transform`` returns the limit coefficients; ``predict`` the index of the
    limiting biprojection in ``biprojections_`` (-1 for a zero limit).
    """

    def __init__(self, group="Z2", shading="+", lambda_=0.5, tol=STEP_TOL, maxit=None):
        self.group = group
        self.shading = shading
        self.lambda_ = lambda_
        self.tol = tol
        self.maxit = maxit

    def fit(self, X=None, y=None):
        self.group_ = group_from_spec(self.group) if isinstance(self.group, str) else self.group
        self.shading_ = Shading.parse(self.shading)
        self.biprojections_ = enumerate_biprojections(self.group_, self.shading_)
        return self

    def _rows(self, X):
        check_is_fitted(self, "group_")
        X = np.atleast_2d(np.asarray(X, dtype=complex))
        if X.shape[1] != self.group_.order:
            raise ValueError(f"expected {self.group_.order} columns, got {X.shape[1]}")
        return X

    def flow(self, X):
        """Full FlowResult per row."""
        return [
            iterate(TwoBox(self.group_, self.shading_, row), self.lambda_, self.tol, self.maxit, track_entropy=False)
            for row in self._rows(X)
        ]

    def transform(self, X):
        return np.array([r.limit.coeff for r in self.flow(X)])

    def predict(self, X):
        out = []
        for r in self.flow(X):
            if r.classification.kind is LimitKind.BIPROJECTION_MULTIPLE:
                out.append(r.classification.index)
            else:
                out.append(-1)
        return np.array(out)


class IsingPhaseClassifier(ClassifierMixin, BaseEstimator):
    """Phase of the Z2 Ising 2-box as a function of beta."""

    def __init__(self, maxit=None):
        self.maxit = maxit

    def fit(self, X=None, y=None):
        self.critical_beta_ = critical_beta()
        self.classes_ = np.array([p.value for p in Phase])
        return self

    def _points(self, X):
        check_is_fitted(self, "critical_beta_")
        betas = np.asarray(X, dtype=float).reshape(-1)
        return [classify_beta(float(b), self.maxit) for b in betas]

    def predict(self, X):
        return np.array([p.phase.value for p in self._points(X)])

    def transform(self, X):
        return np.array([[p.limit_scalar] for p in self._points(X)])


__all__ = ["BlockMapFlow", "IsingPhaseClassifier"]
