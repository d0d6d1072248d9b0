"""L2-regularized linear component of the stacked predictor."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import FitError


@dataclass
class RidgeComponent:
    """Weights are in target units per unit feature (unstandardized)."""

    weights: np.ndarray
    intercept: float
    l2_lambda: float
    feature_means: np.ndarray
    feature_scales: np.ndarray

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return X @ self.weights + self.intercept

    def to_dict(self) -> dict:
        return {
            "weights": self.weights.tolist(),
            "intercept": self.intercept,
            "l2_lambda": self.l2_lambda,
            "feature_means": self.feature_means.tolist(),
            "feature_scales": self.feature_scales.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RidgeComponent":
        return cls(weights=np.array(d["weights"]), intercept=d["intercept"],
                   l2_lambda=d["l2_lambda"],
                   feature_means=np.array(d["feature_means"]),
                   feature_scales=np.array(d["feature_scales"]))


def fit_ridge(X: np.ndarray, y: np.ndarray, l2_lambda: float) -> RidgeComponent:
    """Exact normal-equations solve on standardized features.

    The intercept is unpenalized: features are standardized and the target
    centered, so the intercept recovers mean(y) at the feature means.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or len(X) < 2:
        raise FitError("need at least 2 rows to fit")
    if np.isnan(X).any() or np.isnan(y).any():
        raise FitError("missing values must be imputed before fitting")
    mu = X.mean(axis=0)
    sd = X.std(axis=0)
    sd = np.where(sd == 0, 1.0, sd)
    Z = (X - mu) / sd
    ym = y.mean()
    A = Z.T @ Z + l2_lambda * np.eye(X.shape[1])
    try:
        w_std = np.linalg.solve(A, Z.T @ (y - ym))
    except np.linalg.LinAlgError as exc:
        raise FitError(
            "normal equations are singular; use l2_lambda > 0") from exc
    if not np.all(np.isfinite(w_std)):
        raise FitError("non-finite ridge solution; use l2_lambda > 0")
    w = w_std / sd
    intercept = float(ym - w @ mu)
    return RidgeComponent(weights=w, intercept=intercept, l2_lambda=l2_lambda,
                          feature_means=mu, feature_scales=sd)
