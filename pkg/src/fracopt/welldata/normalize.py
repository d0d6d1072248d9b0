"""Percentile-anchored min-max scaling of environment features.

Scaling anchors are the 1st and 99th percentiles of the observed values so
single outliers do not dominate distances. One percentile convention is
used package-wide: linear interpolation on the sorted sample (numpy's
default "linear" method).
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from ..errors import InsufficientDataError, SchemaError
from .records import Dataset


def percentile(values: Sequence[float], q: float) -> float:
    """Linear-interpolation percentile of a sample, q in [0, 100]."""
    arr = np.asarray(list(values), dtype=float)
    if arr.size == 0:
        raise InsufficientDataError("percentile of an empty sample")
    return float(np.percentile(arr, q, method="linear"))


def fit_normalizer(dataset: Dataset) -> dict[str, tuple[float, float]]:
    """Compute per-feature (p1, p99) stats and attach them to the dataset."""
    stats: dict[str, tuple[float, float]] = {}
    for name in dataset.feature_names:
        vals = [r.environment[name] for r in dataset
                if r.environment.get(name) is not None]
        if len(vals) < 2:
            raise InsufficientDataError(
                f"feature {name!r} has {len(vals)} non-missing values; "
                "need at least 2 to fit scaling anchors")
        stats[name] = (percentile(vals, 1.0), percentile(vals, 99.0))
    dataset.normalization_stats = stats
    return stats


def scale_value(x: Optional[float], p1: float, p99: float) -> Optional[float]:
    if x is None:
        return None
    if p1 == p99:
        return 0.5
    return float(np.clip((x - p1) / (p99 - p1), 0.0, 1.0))


def apply_normalizer(x: dict[str, Optional[float]],
                     stats: dict[str, tuple[float, float]],
                     ) -> dict[str, Optional[float]]:
    """Scale a feature vector into [0, 1]; missing values stay missing."""
    out: dict[str, Optional[float]] = {}
    for name, value in x.items():
        if name not in stats:
            raise SchemaError(f"feature {name!r} absent from normalization stats")
        p1, p99 = stats[name]
        out[name] = scale_value(value, p1, p99)
    return out
