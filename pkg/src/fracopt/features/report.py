"""Per-feature diagnostics bundle with CSV/JSON export."""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from ..model.matrix import build_matrix
from ..welldata.records import Dataset
from .attribution import attribute
from .correlation import spearman_corr
from .eliminate import feature_columns, missing_fraction, variance
from .rfe import default_trainer, rfe
from .sobol import sobol_first_order


@dataclass
class FeatureStats:
    name: str
    missing_fraction: float
    variance: float
    spearman_partner: Optional[str] = None
    spearman_rho: Optional[float] = None
    rfe_rank: Optional[int] = None
    retained: Optional[bool] = None
    sobol_first_order: Optional[float] = None
    mean_abs_shap: Optional[float] = None


@dataclass
class FeatureReport:
    features: list[FeatureStats]

    def ranked(self) -> list[FeatureStats]:
        return sorted(self.features,
                      key=lambda f: (-(f.mean_abs_shap or 0.0), f.name))

    def write_csv(self, path: str | Path) -> None:
        rows = [asdict(f) for f in self.features]
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            writer.writerows(rows)

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps([asdict(f) for f in self.features], indent=2),
            encoding="utf-8")


def build_feature_report(dataset: Dataset, n_keep: Optional[int] = None,
                         sobol_bins: int = 16, shap_probes: int = 60,
                         seed: int = 0) -> FeatureReport:
    """Missingness, variance, correlations, selection rank, sensitivity
    and mean |attribution| for every environment feature."""
    from ..model.stacked import fit_stacked, grid_from_lists

    cols = feature_columns(dataset)
    X, y, schema, _ = build_matrix(dataset)
    names = dataset.feature_names
    stats = {n: FeatureStats(name=n, missing_fraction=missing_fraction(cols[n]),
                             variance=variance(cols[n])) for n in names}

    for a in names:
        best_rho, partner = 0.0, None
        for b in names:
            if a == b:
                continue
            try:
                rho = spearman_corr(cols[a], cols[b])
            except Exception:
                continue
            if rho is not None and abs(rho) > abs(best_rho):
                best_rho, partner = rho, b
        stats[a].spearman_partner = partner
        stats[a].spearman_rho = best_rho if partner else None

    targets = list(y)
    for n in names:
        col_for_rows = [v for v, t in zip(cols[n], [True] * len(cols[n]))]
        try:
            stats[n].sobol_first_order = sobol_first_order(
                col_for_rows[:len(targets)], targets, n_bins=sobol_bins)
        except Exception:
            stats[n].sobol_first_order = None

    env_idx = [schema.column_names.index(n) for n in names]
    n_keep = n_keep or max(1, len(names) // 2)
    ranked = rfe(default_trainer, X[:, env_idx], y, names, n_keep=n_keep,
                 seed=seed)
    for rf in ranked:
        stats[rf.name].rfe_rank = rf.rank
        stats[rf.name].retained = rf.retained

    model = fit_stacked(X, y, schema,
                        grid=grid_from_lists(n_trees=(120,), max_depths=(3,)),
                        seed=seed)
    rng = np.random.default_rng(seed)
    probes = X[rng.integers(0, len(X), size=min(shap_probes, len(X)))]
    mean_abs = np.zeros(len(schema.column_names))
    for x in probes:
        mean_abs += np.abs(attribute(model, x).contributions)
    mean_abs /= len(probes)
    for n in names:
        stats[n].mean_abs_shap = float(mean_abs[schema.column_names.index(n)])

    return FeatureReport(features=[stats[n] for n in names])
