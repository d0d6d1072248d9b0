"""Rank correlation on pairwise-complete samples."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from ..errors import InsufficientDataError


def midranks(values: np.ndarray) -> np.ndarray:
    """Average ranks (1-based); ties share the mean of their positions."""
    order = np.argsort(values, kind="mergesort")
    ranks = np.empty(len(values))
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman_corr(x: Sequence[Optional[float]],
                  y: Sequence[Optional[float]]) -> Optional[float]:
    """Spearman rho: Pearson correlation of midranks.

    Missing values are dropped pairwise-complete. Returns ``None`` when a
    rank vector has zero variance (rho undefined).
    """
    if len(x) != len(y):
        raise InsufficientDataError("samples must have equal length")
    pairs = [(a, b) for a, b in zip(x, y) if a is not None and b is not None]
    if len(pairs) < 3:
        raise InsufficientDataError(
            f"need >= 3 complete pairs, got {len(pairs)}")
    xa = np.array([p[0] for p in pairs], dtype=float)
    ya = np.array([p[1] for p in pairs], dtype=float)
    rx, ry = midranks(xa), midranks(ya)
    sx, sy = rx.std(), ry.std()
    if sx == 0 or sy == 0:
        return None
    # exact rank (anti-)agreement short-circuits float round-off, so
    # perfectly correlated duplicates really score +/-1.0
    if np.array_equal(rx, ry):
        return 1.0
    if np.array_equal(rx + ry, np.full(len(rx), len(rx) + 1.0)):
        return -1.0
    rho = float(((rx - rx.mean()) * (ry - ry.mean())).mean() / (sx * sy))
    return max(-1.0, min(1.0, rho))
