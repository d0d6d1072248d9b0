"""First-order variance-based sensitivity on observational samples."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from ..errors import InsufficientDataError


def sobol_first_order(x: Sequence[Optional[float]],
                      y: Sequence[Optional[float]],
                      n_bins: int = 16) -> Optional[float]:
    """Var(E[y | bin(x)]) / Var(y) over equal-frequency bins of x.

    Estimates the share of target variance attributable to one feature
    without fitting any model. Returns ``None`` when Var(y) is zero.
    """
    pairs = [(a, b) for a, b in zip(x, y) if a is not None and b is not None]
    if len(pairs) < 10 * n_bins:
        raise InsufficientDataError(
            f"need >= {10 * n_bins} complete samples, got {len(pairs)}")
    xa = np.array([p[0] for p in pairs])
    ya = np.array([p[1] for p in pairs])
    var_y = ya.var()
    if var_y == 0:
        return None
    order = np.argsort(xa, kind="mergesort")
    splits = np.array_split(order, n_bins)
    means, weights = [], []
    for idx in splits:
        if len(idx) == 0:
            continue
        means.append(ya[idx].mean())
        weights.append(len(idx))
    means, weights = np.array(means), np.array(weights, dtype=float)
    weights /= weights.sum()
    grand = (weights * means).sum()
    var_cond = (weights * (means - grand) ** 2).sum()
    return float(np.clip(var_cond / var_y, 0.0, 1.0))
