"""Additive per-feature attribution of stacked-model predictions.

The ridge part attributes exactly as w_i * (x_i - mean_i), which is the
Shapley value of a linear model under feature independence. The tree part
runs exact path-dependent Shapley attribution over every regression tree,
using the per-node training cover counts to weigh untaken branches. The
two parts add, and base + sum(contributions) equals the model prediction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InputError
from ..model.stacked import StackedModel
from ..model.trees import RegressionTree


@dataclass
class Attribution:
    contributions: np.ndarray   # per model column, target units
    base: float                 # expected prediction over training data

    @property
    def total(self) -> float:
        return float(self.base + self.contributions.sum())


class _PathElement:
    __slots__ = ("d", "z", "o", "w")

    def __init__(self, d: int, z: float, o: float, w: float):
        self.d, self.z, self.o, self.w = d, z, o, w

    def copy(self) -> "_PathElement":
        return _PathElement(self.d, self.z, self.o, self.w)


def _extend(path: list[_PathElement], pz: float, po: float, pi: int) -> None:
    l = len(path)
    path.append(_PathElement(pi, pz, po, 1.0 if l == 0 else 0.0))
    for i in range(l - 1, -1, -1):
        path[i + 1].w += po * path[i].w * (i + 1) / (l + 1)
        path[i].w = pz * path[i].w * (l - i) / (l + 1)


def _unwind(path: list[_PathElement], index: int) -> None:
    D = len(path) - 1
    one, zero = path[index].o, path[index].z
    n = path[D].w
    for j in range(D - 1, -1, -1):
        if one != 0:
            t = path[j].w
            path[j].w = n * (D + 1) / ((j + 1) * one)
            n = t - path[j].w * zero * (D - j) / (D + 1)
        else:
            path[j].w = path[j].w * (D + 1) / (zero * (D - j))
    for j in range(index, D):
        path[j].d, path[j].z, path[j].o = path[j + 1].d, path[j + 1].z, path[j + 1].o
    path.pop()


def _unwound_sum(path: list[_PathElement], index: int) -> float:
    D = len(path) - 1
    one, zero = path[index].o, path[index].z
    total = 0.0
    if one != 0:
        n = path[D].w
        for j in range(D - 1, -1, -1):
            t = n / ((j + 1) * one)
            total += t
            n = path[j].w - t * zero * (D - j)
    else:
        for j in range(D - 1, -1, -1):
            total += path[j].w / (zero * (D - j))
    return total * (D + 1)


def tree_attribution(tree: RegressionTree, x: np.ndarray,
                     phi: np.ndarray) -> None:
    """Accumulate one tree's exact Shapley contributions into ``phi``."""

    def recurse(node: int, path: list[_PathElement], pz: float, po: float,
                pi: int) -> None:
        path = [el.copy() for el in path]
        _extend(path, pz, po, pi)
        f = int(tree.feature[node])
        if f < 0:
            for i in range(1, len(path)):
                w = _unwound_sum(path, i)
                phi[path[i].d] += w * (path[i].o - path[i].z) * tree.value[node]
            return
        lc, rc = int(tree.left[node]), int(tree.right[node])
        hot, cold = (lc, rc) if x[f] <= tree.threshold[node] else (rc, lc)
        hot_z = tree.cover[hot] / tree.cover[node]
        cold_z = tree.cover[cold] / tree.cover[node]
        iz, io = 1.0, 1.0
        for k in range(1, len(path)):
            if path[k].d == f:
                iz, io = path[k].z, path[k].o
                _unwind(path, k)
                break
        recurse(hot, path, iz * hot_z, io, f)
        recurse(cold, path, iz * cold_z, 0.0, f)

    recurse(0, [], 1.0, 1.0, -1)


def tree_expected_value(tree: RegressionTree) -> float:
    """Cover-weighted mean leaf value: the tree's output at an unknown x."""
    leaves = tree.feature < 0
    root_cover = tree.cover[0]
    return float((tree.value[leaves] * tree.cover[leaves]).sum() / root_cover)


def attribute(model: StackedModel, x: np.ndarray) -> Attribution:
    """Per-feature contributions and base value for one prediction."""
    x = np.asarray(x, dtype=float).ravel()
    n_cols = len(model.schema.column_names)
    if x.shape != (n_cols,):
        raise InputError(f"expected a complete {n_cols}-feature vector")
    if not np.isfinite(x).all():
        raise InputError("attribution input contains non-finite values")
    contrib = model.ridge.weights * (x - model.ridge.feature_means)
    base = float(model.ridge.intercept + model.ridge.weights @ model.ridge.feature_means)
    phi = np.zeros(n_cols)
    for tree in model.trees.trees:
        tree_attribution(tree, x, phi)
        base += tree_expected_value(tree)
    return Attribution(contributions=contrib + phi, base=base)
