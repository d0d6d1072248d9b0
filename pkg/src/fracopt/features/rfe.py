"""Backward feature selection driven by model attributions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import ConfigError, PipelineError
from ..model.ridge import fit_ridge
from ..model.trees import BoostParams, fit_boosted
from .attribution import tree_attribution


@dataclass
class RankedFeature:
    name: str
    rank: int          # 1 = most important; permutation of 1..n_features
    retained: bool


class _BareStacked:
    """Schema-less ridge+trees pair used internally by the selector."""

    def __init__(self, ridge, trees):
        self.ridge, self.trees = ridge, trees

    def importances(self, X_val: np.ndarray) -> np.ndarray:
        total = np.zeros(X_val.shape[1])
        for x in X_val:
            contrib = np.abs(self.ridge.weights * (x - self.ridge.feature_means))
            phi = np.zeros(X_val.shape[1])
            for tree in self.trees.trees:
                tree_attribution(tree, x, phi)
            total += contrib + np.abs(phi)
        return total / max(len(X_val), 1)


def default_trainer(X: np.ndarray, y: np.ndarray) -> _BareStacked:
    ridge = fit_ridge(X, y, 1.0)
    trees = fit_boosted(X, y - ridge.predict(X),
                        BoostParams(n_trees=120, max_depth=3, min_samples_leaf=5),
                        seed=0)
    return _BareStacked(ridge, trees)


def rfe(trainer: Callable[[np.ndarray, np.ndarray], _BareStacked],
        X: np.ndarray, y: np.ndarray, feature_names: list[str],
        n_keep: int, step: int = 1, val_frac: float = 0.25,
        seed: int = 0) -> list[RankedFeature]:
    """Iteratively drop the least-attributed features until n_keep remain.

    Importance is the mean absolute attribution over a held-out validation
    fold. Eliminated features receive ranks after the retained block, in
    reverse order of elimination.
    """
    if n_keep < 1:
        raise ConfigError("n_keep must be >= 1")
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    names = list(feature_names)
    if X.shape[1] != len(names):
        raise ConfigError("feature_names must match matrix columns")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(len(X))
    n_val = max(2, int(round(val_frac * len(X))))
    val_idx, train_idx = perm[:n_val], perm[n_val:]

    active = list(range(len(names)))
    eliminated: list[int] = []
    iteration = 0
    while len(active) > n_keep:
        iteration += 1
        try:
            model = trainer(X[np.ix_(train_idx, active)], y[train_idx])
            imps = model.importances(X[np.ix_(val_idx, active)])
        except Exception as exc:
            raise PipelineError(f"trainer failed at iteration {iteration}: {exc}") from exc
        order = np.argsort(imps, kind="mergesort")   # ascending importance
        n_drop = min(step, len(active) - n_keep)
        for pos in order[:n_drop]:
            eliminated.append(active[pos])
        for pos in sorted(order[:n_drop], reverse=True):
            del active[pos]

    try:
        model = trainer(X[np.ix_(train_idx, active)], y[train_idx])
        final_imps = model.importances(X[np.ix_(val_idx, active)])
    except Exception as exc:
        raise PipelineError(f"trainer failed at final refit: {exc}") from exc

    ranked: list[RankedFeature] = []
    for rank_pos, pos in enumerate(np.argsort(-final_imps, kind="mergesort")):
        ranked.append(RankedFeature(name=names[active[pos]], rank=rank_pos + 1,
                                    retained=True))
    next_rank = len(active) + 1
    for col in reversed(eliminated):
        ranked.append(RankedFeature(name=names[col], rank=next_rank,
                                    retained=False))
        next_rank += 1
    return ranked
