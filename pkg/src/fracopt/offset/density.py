"""Density clustering over normalized feature vectors."""

from __future__ import annotations

from collections import deque

import numpy as np

NOISE = -1


def dbscan(points: np.ndarray, eps: float, min_pts: int) -> np.ndarray:
    """Label points by density connectivity; -1 marks noise.

    A point is core iff its eps-ball (boundary inclusive, self included)
    holds at least ``min_pts`` points. Clusters are numbered in order of
    discovery while scanning points in input order, so labels are
    deterministic; border points join the first cluster that reaches them.
    """
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    labels = np.full(n, NOISE, dtype=int)
    if n == 0:
        return labels
    d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1)
    neighbors = [np.flatnonzero(d2[i] <= eps * eps) for i in range(n)]
    core = np.array([len(nb) >= min_pts for nb in neighbors])

    cluster = 0
    visited = np.zeros(n, dtype=bool)
    for i in range(n):
        if visited[i] or not core[i]:
            continue
        queue = deque([i])
        visited[i] = True
        labels[i] = cluster
        while queue:
            p = queue.popleft()
            for q in neighbors[p]:
                if labels[q] == NOISE:
                    labels[q] = cluster
                if not visited[q] and core[q]:
                    visited[q] = True
                    queue.append(q)
        cluster += 1
    return labels
