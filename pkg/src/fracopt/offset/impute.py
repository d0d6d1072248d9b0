"""Filling missing well parameters from donors.

Three strategies: mean over the top-N most similar wells, pilot-cluster
means, and low-rank matrix completion (alternating least squares) on the
normalized feature matrix. Observed cells are never modified.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import ConfigError


@dataclass
class AlsConfig:
    rank: int = 5
    n_iterations: int = 50
    regularization: float = 0.1
    seed: int = 0


@dataclass
class ImputeContext:
    """Donor information for one pilot imputation."""

    donor_rows: list[dict[str, Optional[float]]] = field(default_factory=list)
    cluster_means: dict[str, float] = field(default_factory=dict)
    global_means: dict[str, float] = field(default_factory=dict)
    normalization_stats: dict[str, tuple[float, float]] = field(default_factory=dict)
    als: AlsConfig = field(default_factory=AlsConfig)


@dataclass
class ImputationReport:
    filled: dict[str, float] = field(default_factory=dict)
    strategy_used: dict[str, str] = field(default_factory=dict)

    @property
    def n_filled(self) -> int:
        return len(self.filled)


def als_complete(matrix: np.ndarray, config: AlsConfig) -> np.ndarray:
    """Complete NaN cells of a matrix by rank-k alternating least squares.

    Returns a full matrix where observed cells are copied bit-exactly and
    missing cells take the low-rank reconstruction.
    """
    M = np.asarray(matrix, dtype=float)
    mask = ~np.isnan(M)
    n, d = M.shape
    k = min(config.rank, n, d)
    if k < 1:
        raise ConfigError("ALS rank must be >= 1")
    rng = np.random.default_rng(config.seed)
    U = rng.normal(scale=0.1, size=(n, k))
    V = rng.normal(scale=0.1, size=(d, k))
    reg = config.regularization * np.eye(k)
    filled0 = np.where(mask, M, 0.0)
    for _ in range(config.n_iterations):
        for i in range(n):
            obs = mask[i]
            if not obs.any():
                U[i] = 0.0
                continue
            Vo = V[obs]
            U[i] = np.linalg.solve(Vo.T @ Vo + reg, Vo.T @ filled0[i, obs])
        for j in range(d):
            obs = mask[:, j]
            if not obs.any():
                V[j] = 0.0
                continue
            Uo = U[obs]
            V[j] = np.linalg.solve(Uo.T @ Uo + reg, Uo.T @ filled0[obs, j])
    recon = U @ V.T
    out = M.copy()
    out[~mask] = recon[~mask]
    return out


def _fill_from_donors(name: str, donors: list[dict[str, Optional[float]]],
                      ) -> Optional[float]:
    vals = [row[name] for row in donors if row.get(name) is not None]
    if not vals:
        return None
    return float(np.mean(vals))


def impute(record: dict[str, Optional[float]], strategy: str,
           context: ImputeContext) -> tuple[dict[str, float], ImputationReport]:
    """Return a completed copy of ``record`` plus what was filled and how.

    A feature with no usable donor escalates to the global mean with a
    warning rather than failing the pipeline.
    """
    if strategy not in ("topn_mean", "cluster_mean", "matrix_factorization"):
        raise ConfigError(f"unknown imputation strategy {strategy!r}")
    report = ImputationReport()
    out: dict[str, float] = {}
    missing = [k for k, v in record.items() if v is None]

    als_values: dict[str, float] = {}
    if strategy == "matrix_factorization" and missing and context.donor_rows:
        names = list(record.keys())
        stats = context.normalization_stats

        def scaled(row):
            vals = []
            for nm in names:
                v = row.get(nm)
                if v is None or nm not in stats:
                    vals.append(np.nan)
                else:
                    p1, p99 = stats[nm]
                    vals.append(0.5 if p1 == p99 else
                                np.clip((v - p1) / (p99 - p1), 0.0, 1.0))
            return vals

        M = np.array([scaled(r) for r in context.donor_rows] + [scaled(record)])
        completed = als_complete(M, context.als)
        for j, nm in enumerate(names):
            if nm in missing and nm in stats:
                p1, p99 = stats[nm]
                v = float(np.clip(completed[-1, j], 0.0, 1.0))
                als_values[nm] = p1 + v * (p99 - p1)

    for name, value in record.items():
        if value is not None:
            out[name] = value
            continue
        filled: Optional[float] = None
        used = strategy
        if strategy == "topn_mean":
            filled = _fill_from_donors(name, context.donor_rows)
        elif strategy == "cluster_mean":
            filled = context.cluster_means.get(name)
        else:
            filled = als_values.get(name)
        if filled is None:
            filled = context.global_means.get(name)
            used = "global_mean"
            if filled is None:
                raise ConfigError(
                    f"feature {name!r} has no donors and no global mean")
            warnings.warn(f"feature {name!r}: no donor values, "
                          "falling back to the global mean", stacklevel=2)
        out[name] = filled
        report.filled[name] = filled
        report.strategy_used[name] = used
    return out, report
