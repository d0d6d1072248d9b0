"""Mean silhouette score of a labeling; noise points are excluded."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .density import NOISE


def silhouette_mean(points: np.ndarray, labels: np.ndarray) -> Optional[float]:
    """(b - a) / max(a, b) averaged over non-noise points.

    a is the mean distance to the point's own cluster (self excluded), b
    the smallest mean distance to any other cluster. Points in singleton
    clusters score 0. Returns ``None`` with fewer than two clusters.
    """
    pts = np.asarray(points, dtype=float)
    labels = np.asarray(labels)
    keep = labels != NOISE
    ids = sorted(set(labels[keep].tolist()))
    if len(ids) < 2:
        return None
    dist = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))
    members = {c: np.flatnonzero(labels == c) for c in ids}
    scores = []
    for i in np.flatnonzero(keep):
        own = members[labels[i]]
        if len(own) == 1:
            scores.append(0.0)
            continue
        a = dist[i, own[own != i]].mean()
        b = min(dist[i, members[c]].mean() for c in ids if c != labels[i])
        scores.append((b - a) / max(a, b) if max(a, b) > 0 else 0.0)
    return float(np.mean(scores))
