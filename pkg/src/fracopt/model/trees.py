"""Axis-aligned regression trees and least-squares gradient boosting.

Trees are stored as flat arrays (feature, threshold, children, value,
cover) so prediction vectorizes and attribution can walk node statistics.
``cover`` holds the number of training rows routed through each node.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, FitError


@dataclass
class RegressionTree:
    feature: np.ndarray     # split feature per node, -1 for leaves
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray       # leaf prediction (shrinkage already applied)
    cover: np.ndarray       # training rows through the node

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        nodes = np.zeros(len(X), dtype=np.int64)
        active = self.feature[nodes] >= 0
        while active.any():
            cur = nodes[active]
            f = self.feature[cur]
            go_left = X[active, f] <= self.threshold[cur]
            nodes[active] = np.where(go_left, self.left[cur], self.right[cur])
            active = self.feature[nodes] >= 0
        return self.value[nodes]

    def to_dict(self) -> dict:
        return {k: getattr(self, k).tolist()
                for k in ("feature", "threshold", "left", "right", "value", "cover")}

    @classmethod
    def from_dict(cls, d: dict) -> "RegressionTree":
        return cls(feature=np.array(d["feature"], dtype=np.int64),
                   threshold=np.array(d["threshold"], dtype=float),
                   left=np.array(d["left"], dtype=np.int64),
                   right=np.array(d["right"], dtype=np.int64),
                   value=np.array(d["value"], dtype=float),
                   cover=np.array(d["cover"], dtype=float))


def build_tree(X: np.ndarray, y: np.ndarray, max_depth: int,
               min_samples_leaf: int) -> RegressionTree:
    """Greedy CART fit minimizing squared error.

    Candidate thresholds are midpoints between consecutive distinct sorted
    values; ties in gain resolve to the lowest feature index then lowest
    threshold, which keeps fits deterministic.
    """
    n, d = X.shape
    feature, threshold, left, right, value, cover = [], [], [], [], [], []

    def add_node() -> int:
        feature.append(-1); threshold.append(0.0); left.append(-1)
        right.append(-1); value.append(0.0); cover.append(0)
        return len(feature) - 1

    def grow(idx: np.ndarray, depth: int) -> int:
        node = add_node()
        yi = y[idx]
        value[node] = float(yi.mean())
        cover[node] = int(len(idx))
        if depth >= max_depth or len(idx) < 2 * min_samples_leaf or np.ptp(yi) == 0:
            return node
        ym = yi.mean()
        sse_parent = float(((yi - ym) ** 2).sum())
        best_gain, best_f, best_t = 1e-12, -1, 0.0
        m = len(idx)
        for f in range(d):
            xs = X[idx, f]
            order = np.argsort(xs, kind="mergesort")
            xo = xs[order]
            yo = yi[order]
            csum = np.cumsum(yo)
            csq = np.cumsum(yo * yo)
            ks = np.arange(min_samples_leaf, m - min_samples_leaf + 1)
            if len(ks) == 0:
                continue
            ks = ks[xo[ks - 1] < xo[np.minimum(ks, m - 1)]]
            if len(ks) == 0:
                continue
            ls, lq = csum[ks - 1], csq[ks - 1]
            rs, rq = csum[-1] - ls, csq[-1] - lq
            sse = (lq - ls * ls / ks) + (rq - rs * rs / (m - ks))
            gains = sse_parent - sse
            j = int(np.argmax(gains))
            if gains[j] > best_gain:
                best_gain = float(gains[j])
                best_f = f
                best_t = float(0.5 * (xo[ks[j] - 1] + xo[ks[j]]))
        if best_f < 0:
            return node
        mask = X[idx, best_f] <= best_t
        feature[node], threshold[node] = best_f, best_t
        left[node] = grow(idx[mask], depth + 1)
        right[node] = grow(idx[~mask], depth + 1)
        return node

    grow(np.arange(n), 0)
    return RegressionTree(feature=np.array(feature, dtype=np.int64),
                          threshold=np.array(threshold),
                          left=np.array(left, dtype=np.int64),
                          right=np.array(right, dtype=np.int64),
                          value=np.array(value),
                          cover=np.array(cover, dtype=float))


@dataclass
class BoostParams:
    n_trees: int = 300
    learning_rate: float = 0.08
    max_depth: int = 3
    subsample: float = 1.0
    min_samples_leaf: int = 5

    def validate(self) -> None:
        if self.n_trees < 0:
            raise ConfigError("n_trees must be >= 0")
        if not (0.0 < self.learning_rate <= 1.0):
            raise ConfigError("learning_rate must lie in (0, 1]")
        if self.max_depth < 1:
            raise ConfigError("max_depth must be >= 1")
        if not (0.0 < self.subsample <= 1.0):
            raise ConfigError("subsample must lie in (0, 1]")
        if self.min_samples_leaf < 1:
            raise ConfigError("min_samples_leaf must be >= 1")


@dataclass
class BoostedTreesComponent:
    trees: list[RegressionTree] = field(default_factory=list)
    params: BoostParams = field(default_factory=BoostParams)

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.zeros(len(X))
        for t in self.trees:
            out += t.predict(X)
        return out

    def to_dict(self) -> dict:
        return {"params": vars(self.params),
                "trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def from_dict(cls, d: dict) -> "BoostedTreesComponent":
        return cls(trees=[RegressionTree.from_dict(t) for t in d["trees"]],
                   params=BoostParams(**d["params"]))


def fit_boosted(X: np.ndarray, residuals: np.ndarray, params: BoostParams,
                seed: int = 0) -> BoostedTreesComponent:
    """Stagewise least-squares boosting on the supplied residuals.

    Each tree is fit to the current residuals on a fresh subsample and its
    leaf values are shrunk by the learning rate before being subtracted.
    """
    params.validate()
    X = np.asarray(X, dtype=float)
    r = np.asarray(residuals, dtype=float).copy()
    n = len(r)
    if params.n_trees > 0 and n < 2 * params.min_samples_leaf:
        raise FitError(
            f"{n} samples cannot populate leaves of size {params.min_samples_leaf}")
    rng = np.random.default_rng(seed)
    trees: list[RegressionTree] = []
    for _ in range(params.n_trees):
        if params.subsample < 1.0:
            m = max(2 * params.min_samples_leaf, int(round(params.subsample * n)))
            idx = rng.permutation(n)[:m]
        else:
            idx = np.arange(n)
        tree = build_tree(X[idx], r[idx], params.max_depth, params.min_samples_leaf)
        tree.value = tree.value * params.learning_rate
        r -= tree.predict(X)
        trees.append(tree)
    return BoostedTreesComponent(trees=trees, params=params)
