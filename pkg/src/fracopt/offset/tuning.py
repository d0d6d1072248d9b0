"""Gradient-free hyperparameter search for the density clustering."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import InsufficientDataError
from .density import NOISE, dbscan
from .silhouette import silhouette_mean


@dataclass
class ClusteringChoice:
    eps: float
    min_pts: int
    silhouette: Optional[float]
    labels: np.ndarray
    fallback: bool = False   # no feasible configuration; use all points


def _score(points: np.ndarray, eps: float, min_pts: int,
           pilot_index: Optional[int]):
    """Silhouette discounted by the kept fraction: raw silhouette rewards
    discarding points as noise, which defeats the search."""
    labels = dbscan(points, eps, min_pts)
    if pilot_index is not None and labels[pilot_index] == NOISE:
        return None, None, labels
    s = silhouette_mean(points, labels)
    if s is None:
        return None, None, labels
    kept = float((labels != NOISE).mean())
    return s * kept, s, labels


def tune_clustering(points: np.ndarray, search_budget: int = 60,
                    pilot_index: Optional[int] = None,
                    seed: int = 0) -> ClusteringChoice:
    """Maximize mean silhouette over (eps, min_pts).

    Random candidates over eps in [p5, p95] of pairwise distances and
    min_pts in 2..10, then local refinement around the incumbent. A
    configuration is feasible only if the pilot is not labeled noise; if
    nothing is feasible the fallback flag is raised and the caller should
    treat the whole filtered set as the cluster.
    """
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    if n < 10:
        raise InsufficientDataError(f"need >= 10 points to tune, got {n}")
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(n, k=1)
    pd = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))[iu]
    lo, hi = np.percentile(pd, 5), np.percentile(pd, 95)
    if hi <= lo:
        lo, hi = max(lo * 0.5, 1e-9), lo * 1.5 + 1e-9

    best: Optional[tuple[float, float, float, int, np.ndarray]] = None
    evals = 0
    budget = max(1, search_budget)

    def consider(eps: float, min_pts: int) -> None:
        nonlocal best, evals
        if evals >= budget:
            return
        evals += 1
        score, sil, labels = _score(pts, eps, min_pts, pilot_index)
        if score is None:
            return
        if best is None or score > best[0]:
            best = (score, sil, eps, min_pts, labels)

    n_random = max(1, int(0.7 * budget))
    for _ in range(n_random):
        consider(float(rng.uniform(lo, hi)), int(rng.integers(2, 11)))
    while evals < budget and best is not None:
        _, _, eps0, mp0, _ = best
        scale = float(rng.uniform(0.7, 1.3))
        consider(float(np.clip(eps0 * scale, lo * 0.25, hi * 2.0)),
                 int(np.clip(mp0 + rng.integers(-1, 2), 2, 10)))

    if best is None:
        return ClusteringChoice(eps=float(hi), min_pts=2, silhouette=None,
                                labels=np.zeros(n, dtype=int), fallback=True)
    _, sil, eps, min_pts, labels = best
    return ClusteringChoice(eps=eps, min_pts=min_pts, silhouette=sil,
                            labels=labels)
