"""Design-matrix construction from well records.

Numeric columns are the environment features plus the six design
parameters; categorical labels (field, layer, face, well type) are one-hot
encoded with a ``cat.`` prefix. Missing numerics in training rows are
imputed with the column mean; prediction vectors must be complete.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import InputError
from ..welldata.records import DESIGN_PARAMS, Dataset, WellRecord
from ..welldata.targets import target_90d

CATEGORICAL_COLUMNS = ("field_id", "layer_id", "face_id", "well_type")


@dataclass
class MatrixSchema:
    env_features: list[str]
    categorical_levels: dict[str, list[str]]
    column_names: list[str] = field(default_factory=list)
    train_means: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        if not self.column_names:
            self.column_names = list(self.env_features) + list(DESIGN_PARAMS)
            for col, levels in self.categorical_levels.items():
                self.column_names += [f"cat.{col}.{lv}" for lv in levels]

    @property
    def n_numeric(self) -> int:
        return len(self.env_features) + len(DESIGN_PARAMS)

    def to_dict(self) -> dict:
        return {"env_features": self.env_features,
                "categorical_levels": self.categorical_levels,
                "column_names": self.column_names,
                "train_means": (self.train_means.tolist()
                                if self.train_means is not None else None)}

    @classmethod
    def from_dict(cls, d: dict) -> "MatrixSchema":
        means = d.get("train_means")
        return cls(env_features=d["env_features"],
                   categorical_levels=d["categorical_levels"],
                   column_names=d["column_names"],
                   train_means=np.array(means) if means is not None else None)


def _label_of(record: WellRecord, col: str) -> str:
    v = getattr(record, col)
    return v.value if hasattr(v, "value") else str(v)


def _numeric_row(record: WellRecord, schema: MatrixSchema) -> list[Optional[float]]:
    row: list[Optional[float]] = [record.environment.get(f)
                                  for f in schema.env_features]
    for p in DESIGN_PARAMS:
        v = record.design.get(p)
        row.append(float(v) if v is not None else None)
    return row


def _onehot_row(record: WellRecord, schema: MatrixSchema) -> list[float]:
    out: list[float] = []
    for col, levels in schema.categorical_levels.items():
        label = _label_of(record, col)
        out += [1.0 if label == lv else 0.0 for lv in levels]
    return out


def build_matrix(dataset: Dataset, env_features: Optional[list[str]] = None,
                 ) -> tuple[np.ndarray, np.ndarray, MatrixSchema, list[str]]:
    """Rows with a computable 90-day target become (X, y) training rows."""
    env_features = env_features if env_features is not None else dataset.feature_names
    levels = {col: sorted({_label_of(r, col) for r in dataset})
              for col in CATEGORICAL_COLUMNS}
    schema = MatrixSchema(env_features=list(env_features),
                          categorical_levels=levels)
    rows, targets, ids = [], [], []
    for r in dataset:
        if len(r.production) == 0:
            continue
        t = target_90d(r.production)
        if t is None:
            continue
        rows.append(_numeric_row(r, schema) + _onehot_row(r, schema))
        targets.append(t)
        ids.append(r.well_id)
    X = np.array([[np.nan if v is None else v for v in row] for row in rows],
                 dtype=float)
    if len(X) == 0:
        raise InputError("no rows with sufficient production history")
    means = np.nanmean(X[:, :schema.n_numeric], axis=0)
    for j in range(schema.n_numeric):
        col = X[:, j]
        col[np.isnan(col)] = means[j]
    schema.train_means = means
    return X, np.array(targets), schema, ids


def vector_for(schema: MatrixSchema, environment: dict[str, Optional[float]],
               design: dict[str, Optional[float]] | np.ndarray,
               labels: Optional[dict[str, str]] = None) -> np.ndarray:
    """Assemble one prediction row; raises on any missing numeric value."""
    vec: list[float] = []
    for f in schema.env_features:
        v = environment.get(f)
        if v is None:
            raise InputError(f"environment feature {f!r} is missing")
        vec.append(float(v))
    if isinstance(design, np.ndarray):
        if design.shape != (len(DESIGN_PARAMS),):
            raise InputError(f"design vector must have {len(DESIGN_PARAMS)} entries")
        vec += [float(v) for v in design]
    else:
        for p in DESIGN_PARAMS:
            v = design.get(p)
            if v is None:
                raise InputError(f"design parameter {p!r} is missing")
            vec.append(float(v))
    labels = labels or {}
    for col, lvls in schema.categorical_levels.items():
        label = labels.get(col, "")
        vec += [1.0 if label == lv else 0.0 for lv in lvls]
    return np.array(vec, dtype=float)


def record_vector(schema: MatrixSchema, record: WellRecord) -> np.ndarray:
    env = {f: record.environment.get(f) for f in schema.env_features}
    design = {p: record.design.get(p) for p in DESIGN_PARAMS}
    labels = {col: _label_of(record, col) for col in CATEGORICAL_COLUMNS}
    return vector_for(schema, env, design, labels)
