"""Filter-based feature elimination: missingness, correlation, variance."""

from __future__ import annotations

import numpy as np

from ..errors import PipelineError
from ..welldata.records import Dataset
from .correlation import spearman_corr


def feature_columns(dataset: Dataset, names: list[str] | None = None,
                    ) -> dict[str, list]:
    names = names if names is not None else dataset.feature_names
    return {n: [r.environment.get(n) for r in dataset] for n in names}


def missing_fraction(column: list) -> float:
    if not column:
        return 1.0
    return sum(v is None for v in column) / len(column)


def variance(column: list) -> float:
    vals = [v for v in column if v is not None]
    if len(vals) < 2:
        return 0.0
    return float(np.var(vals))


def eliminate(dataset: Dataset, missing_thresh: float = 0.8,
              corr_thresh: float = 1.0, var_thresh: float = 0.0,
              ) -> list[str]:
    """Return retained feature names in schema order.

    Three passes: drop features with too many missing values, drop one of
    each |rho| >= corr_thresh pair (keeping the one with fewer missing
    values, ties broken by name), then drop features with variance at or
    below var_thresh.
    """
    cols = feature_columns(dataset)
    retained = [n for n in dataset.feature_names
                if missing_fraction(cols[n]) <= missing_thresh]

    dropped: set[str] = set()
    for i, a in enumerate(retained):
        if a in dropped:
            continue
        for b in retained[i + 1:]:
            if b in dropped:
                continue
            try:
                rho = spearman_corr(cols[a], cols[b])
            except Exception:
                continue
            if rho is None or abs(rho) < corr_thresh:
                continue
            ma, mb = missing_fraction(cols[a]), missing_fraction(cols[b])
            if ma < mb:
                dropped.add(b)
            elif mb < ma:
                dropped.add(a)
            else:
                dropped.add(max(a, b))
            if a in dropped:
                break
    retained = [n for n in retained if n not in dropped]

    retained = [n for n in retained if variance(cols[n]) > var_thresh]
    if not retained:
        raise PipelineError("feature elimination removed every feature")
    return retained
