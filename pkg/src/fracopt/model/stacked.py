"""Stacked forecaster: ridge regression plus boosted trees on residuals.

Prediction is always ridge(x) + trees(x). Hyperparameters come from
cross-validated grid search; ties prefer the simpler ensemble (fewer
trees, then shallower, then heavier regularization).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ..errors import ConfigError, FitError
from .matrix import MatrixSchema
from .metrics import Metrics, compute_metrics
from .ridge import RidgeComponent, fit_ridge
from .trees import BoostedTreesComponent, BoostParams, fit_boosted

MODEL_FORMAT_VERSION = 1


@dataclass
class HyperPoint:
    l2_lambda: float = 1.0
    boost: BoostParams = field(default_factory=BoostParams)


def default_grid() -> list[HyperPoint]:
    return [
        HyperPoint(l2_lambda=0.3, boost=BoostParams(n_trees=300, max_depth=3)),
        HyperPoint(l2_lambda=3.0, boost=BoostParams(n_trees=300, max_depth=3)),
    ]


def grid_from_lists(l2_lambdas: Sequence[float] = (1.0,),
                    n_trees: Sequence[int] = (300,),
                    max_depths: Sequence[int] = (3,),
                    learning_rates: Sequence[float] = (0.08,),
                    subsamples: Sequence[float] = (1.0,),
                    min_samples_leafs: Sequence[int] = (5,),
                    ) -> list[HyperPoint]:
    grid = []
    for lam in l2_lambdas:
        for nt in n_trees:
            for md in max_depths:
                for lr in learning_rates:
                    for ss in subsamples:
                        for ml in min_samples_leafs:
                            grid.append(HyperPoint(
                                l2_lambda=lam,
                                boost=BoostParams(n_trees=nt, learning_rate=lr,
                                                  max_depth=md, subsample=ss,
                                                  min_samples_leaf=ml)))
    return grid


@dataclass
class StackedModel:
    ridge: RidgeComponent
    trees: BoostedTreesComponent
    schema: MatrixSchema
    seed: int = 0
    cv_scores: list[dict] = field(default_factory=list)

    def predict_matrix(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != len(self.schema.column_names):
            raise FitError(
                f"expected {len(self.schema.column_names)} features, got {X.shape[1]}")
        return self.ridge.predict(X) + self.trees.predict(X)

    def predict(self, x: np.ndarray) -> float:
        out = self.predict_matrix(np.atleast_2d(x))
        if not np.isfinite(out).all():
            raise FitError("non-finite prediction")
        return float(out[0])

    def to_dict(self) -> dict:
        return {"format_version": MODEL_FORMAT_VERSION,
                "seed": self.seed,
                "schema": self.schema.to_dict(),
                "ridge": self.ridge.to_dict(),
                "trees": self.trees.to_dict(),
                "cv_scores": self.cv_scores}

    @classmethod
    def from_dict(cls, d: dict) -> "StackedModel":
        if d.get("format_version") != MODEL_FORMAT_VERSION:
            raise ConfigError(
                f"unsupported model format {d.get('format_version')!r}")
        return cls(ridge=RidgeComponent.from_dict(d["ridge"]),
                   trees=BoostedTreesComponent.from_dict(d["trees"]),
                   schema=MatrixSchema.from_dict(d["schema"]),
                   seed=d.get("seed", 0),
                   cv_scores=d.get("cv_scores", []))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "StackedModel":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _fold_indices(n: int, n_folds: int, seed: int) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    return [np.array(chunk) for chunk in np.array_split(perm, n_folds)]


def _fit_pair(X, y, point: HyperPoint, seed: int):
    ridge = fit_ridge(X, y, point.l2_lambda)
    residuals = y - ridge.predict(X)
    trees = fit_boosted(X, residuals, point.boost, seed=seed)
    return ridge, trees


def fit_stacked(X: np.ndarray, y: np.ndarray, schema: MatrixSchema,
                grid: Optional[list[HyperPoint]] = None, n_folds: int = 5,
                seed: int = 0) -> StackedModel:
    """Grid-search by K-fold RMSE, then refit the winner on all rows."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    grid = grid if grid is not None else default_grid()
    if not grid:
        raise ConfigError("hyperparameter grid is empty")
    if len(X) < 2 * n_folds:
        raise FitError(f"need at least {2 * n_folds} rows for {n_folds}-fold CV")

    cv_scores: list[dict] = []
    if len(grid) == 1:
        best = grid[0]
    else:
        folds = _fold_indices(len(X), n_folds, seed)
        results = []
        for gi, point in enumerate(grid):
            rmses = []
            for fi, val_idx in enumerate(folds):
                train_idx = np.setdiff1d(np.arange(len(X)), val_idx)
                ridge, trees = _fit_pair(X[train_idx], y[train_idx], point,
                                         seed=seed + fi)
                pred = ridge.predict(X[val_idx]) + trees.predict(X[val_idx])
                rmses.append(float(np.sqrt(np.mean((pred - y[val_idx]) ** 2))))
            mean_rmse = float(np.mean(rmses))
            results.append((mean_rmse, point.boost.n_trees,
                            point.boost.max_depth, point.l2_lambda, gi))
            cv_scores.append({"grid_index": gi, "l2_lambda": point.l2_lambda,
                              "n_trees": point.boost.n_trees,
                              "max_depth": point.boost.max_depth,
                              "learning_rate": point.boost.learning_rate,
                              "mean_rmse": mean_rmse,
                              "fold_rmses": rmses})
        results.sort()
        best = grid[results[0][-1]]

    ridge, trees = _fit_pair(X, y, best, seed=seed)
    return StackedModel(ridge=ridge, trees=trees, schema=schema, seed=seed,
                        cv_scores=cv_scores)


def split_holdout(n: int, holdout_frac: float = 0.3, seed: int = 0,
                  ) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    cut = int(round(n * (1.0 - holdout_frac)))
    return perm[:cut], perm[cut:]


def evaluate(model: StackedModel, X: np.ndarray, y: np.ndarray) -> Metrics:
    return compute_metrics(y, model.predict_matrix(X))
