"""Exact 2-D stochastic neighbor embedding plus coordinate regression.

The embedding is the classic dense formulation (no tree acceleration):
per-point bandwidths from a binary search on perplexity, symmetrized
affinities, early exaggeration, then momentum gradient descent with a
fixed iteration schedule. Initialization is the scaled principal-component
projection, which is deterministic, so duplicated inputs stay coincident.

New wells get coordinates from inverse-distance weighted interpolation
over their k nearest training wells in feature space; a well identical to
a training point maps exactly onto its coordinates.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from ..errors import InputError

_EPS = 1e-12


def _entropy_probs(d2_row: np.ndarray, beta: float) -> tuple[float, np.ndarray]:
    p = np.exp(-d2_row * beta)
    s = p.sum()
    if s <= 0:
        return 0.0, np.zeros_like(p)
    p /= s
    h = float(-(p[p > 0] * np.log(p[p > 0])).sum())
    return h, p


def _conditional_affinities(d2: np.ndarray, perplexity: float) -> np.ndarray:
    n = len(d2)
    target = np.log(perplexity)
    P = np.zeros((n, n))
    for i in range(n):
        row = np.delete(d2[i], i)
        beta, lo, hi = 1.0, 0.0, np.inf
        for _ in range(64):
            h, p = _entropy_probs(row, beta)
            if abs(h - target) < 1e-7:
                break
            if h > target:
                lo = beta
                beta = beta * 2 if hi == np.inf else 0.5 * (beta + hi)
            else:
                hi = beta
                beta = 0.5 * (beta + lo)
        P[i, np.arange(n) != i] = p
    return P


def _pca_init(X: np.ndarray) -> np.ndarray:
    Xc = X - X.mean(axis=0)
    _, _, vt = np.linalg.svd(Xc, full_matrices=False)
    Y = Xc @ vt[:2].T
    sd = Y[:, 0].std()
    return Y * (1e-4 / sd) if sd > 0 else Y


@dataclass
class Embedding2D:
    coords: np.ndarray                   # (n, 2), dimensionless
    perplexity: float
    seed: int
    train_features: np.ndarray           # inputs used to embed (complete)
    well_ids: list[str] = field(default_factory=list)
    knn_k: int = 5


def tsne_embed(X: np.ndarray, perplexity: float = 30.0, seed: int = 0,
               n_iter: int = 500, well_ids: Optional[list[str]] = None,
               ) -> Embedding2D:
    X = np.asarray(X, dtype=float)
    n = len(X)
    if n < 4:
        raise InputError(f"need >= 4 rows to embed, got {n}")
    if np.isnan(X).any():
        raise InputError("embedding input must be imputed first")
    perp = min(perplexity, max(2.0, (n - 1) / 3.0))

    d2 = ((X[:, None, :] - X[None, :, :]) ** 2).sum(-1)
    Pc = _conditional_affinities(d2, perp)
    P = (Pc + Pc.T) / (2.0 * n)
    P = np.maximum(P, _EPS)

    Y = _pca_init(X)
    vel = np.zeros_like(Y)
    lr = max(n / 12.0, 50.0)
    exaggeration_until = min(100, n_iter // 4)
    for it in range(n_iter):
        momentum = 0.5 if it < 250 else 0.8
        Pe = P * 12.0 if it < exaggeration_until else P
        dy2 = ((Y[:, None, :] - Y[None, :, :]) ** 2).sum(-1)
        w = 1.0 / (1.0 + dy2)
        np.fill_diagonal(w, 0.0)
        Q = np.maximum(w / w.sum(), _EPS)
        pq = (Pe - Q) * w
        grad = 4.0 * ((np.diag(pq.sum(axis=1)) - pq) @ Y)
        vel = momentum * vel - lr * grad
        Y = Y + vel
        Y = Y - Y.mean(axis=0)
    return Embedding2D(coords=Y, perplexity=perp, seed=seed,
                       train_features=X.copy(),
                       well_ids=list(well_ids or []))


def predict_coords(embedding: Embedding2D, x_new: np.ndarray,
                   ) -> tuple[float, float]:
    """Interpolate embedding coordinates for an unseen sample."""
    x = np.asarray(x_new, dtype=float).ravel()
    if x.shape != (embedding.train_features.shape[1],):
        raise InputError("feature vector does not match embedding schema")
    d = np.sqrt(((embedding.train_features - x) ** 2).sum(axis=1))
    hit = np.flatnonzero(d == 0)
    if len(hit):
        cx, cy = embedding.coords[hit[0]]
        return float(cx), float(cy)
    k = min(embedding.knn_k, len(d))
    idx = np.argsort(d, kind="mergesort")[:k]
    wgt = 1.0 / d[idx]
    wgt /= wgt.sum()
    cx, cy = (embedding.coords[idx] * wgt[:, None]).sum(axis=0)
    return float(cx), float(cy)


def export_scatter(embedding: Embedding2D, labels: np.ndarray,
                   pilot_coords: Optional[tuple[float, float]],
                   csv_path: str | Path, svg_path: Optional[str | Path] = None,
                   pilot_id: str = "pilot") -> None:
    """Write the (well_id, x, y, cluster, is_pilot) table and an SVG plot."""
    rows = []
    ids = embedding.well_ids or [f"row{i}" for i in range(len(embedding.coords))]
    for wid, (x, y), lab in zip(ids, embedding.coords, labels):
        rows.append((wid, float(x), float(y), int(lab), 0))
    if pilot_coords is not None:
        rows.append((pilot_id, pilot_coords[0], pilot_coords[1], -2, 1))
    with Path(csv_path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["well_id", "x", "y", "cluster_label", "is_pilot"])
        writer.writerows(rows)
    if svg_path is None:
        return
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 5))
    labs = np.asarray(labels)
    for lab in sorted(set(labs.tolist())):
        sel = labs == lab
        name = "noise" if lab == -1 else f"cluster {lab}"
        ax.scatter(embedding.coords[sel, 0], embedding.coords[sel, 1],
                   s=18, alpha=0.75, label=name)
    if pilot_coords is not None:
        ax.scatter([pilot_coords[0]], [pilot_coords[1]], marker="*", s=260,
                   c="crimson", edgecolors="black", zorder=5, label="pilot")
    ax.set_xlabel("embedding x")
    ax.set_ylabel("embedding y")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(svg_path, format="svg")
    plt.close(fig)
