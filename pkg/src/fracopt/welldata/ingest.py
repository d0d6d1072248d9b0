"""CSV ingestion and export.

Format: UTF-8, header row, comma separator, "." decimal mark. Missing
numeric cells are empty or "n/a". The production series is packed into one
cell as ``days:fluid`` pairs joined by ";" (e.g. ``30:1100;61:2300``),
which keeps one row per treatment and makes round-trips exact.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..errors import IngestionError, SchemaError
from .records import (Dataset, DesignParams, ProductionSeries, TreatmentType,
                      WellRecord, WellType)

MISSING_TOKENS = {"", "n/a", "na", "nan", "null", "none"}

_DESIGN_COLUMNS = ("pad_share", "fluid_volume", "proppant_mass",
                   "fluid_rate", "final_prop_conc", "start_prop_conc")


@dataclass
class CsvSchema:
    """Column mapping for ingestion.

    ``env_features`` lists the environment columns in schema order;
    ``aliases`` unifies categorical spellings after trim+casefold.
    """

    well_id: str = "well_id"
    field_id: str = "field_id"
    layer_id: str = "layer_id"
    face_id: str = "face_id"
    well_type: str = "well_type"
    treatment_type: str = "treatment_type"
    n_stages: str = "n_stages"
    x_coord: str = "x_coord"
    y_coord: str = "y_coord"
    production: str = "production"
    env_features: list[str] = field(default_factory=list)
    design_columns: dict[str, str] = field(
        default_factory=lambda: {c: c for c in _DESIGN_COLUMNS})
    aliases: dict[str, str] = field(default_factory=dict)


def _parse_float(cell: str) -> Optional[float]:
    if cell.strip().casefold() in MISSING_TOKENS:
        return None
    try:
        return float(cell)
    except ValueError:
        return None


def _canonical_label(cell: str, aliases: dict[str, str]) -> str:
    label = cell.strip().casefold()
    return aliases.get(label, label)


def _parse_series(cell: str) -> ProductionSeries:
    cell = cell.strip()
    if not cell:
        return ProductionSeries([])
    pts = []
    for chunk in cell.split(";"):
        day, _, fluid = chunk.partition(":")
        pts.append((float(day), float(fluid)))
    return ProductionSeries(pts)


def ingest_csv(path: str | Path, schema: CsvSchema) -> Dataset:
    """Read a well dataset; unparseable numeric cells become missing."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        if schema.well_id not in header:
            raise SchemaError(
                f"mandatory column {schema.well_id!r} missing from {path.name}")
        absent = [c for c in schema.env_features if c not in header]
        if absent:
            raise SchemaError(f"mapped columns missing from header: {absent}")
        rows = []
        for raw in reader:
            design_kwargs = {}
            for param, col in schema.design_columns.items():
                if col in raw:
                    design_kwargs[param] = _parse_float(raw[col])
            n_stages = _parse_float(raw.get(schema.n_stages, ""))
            if n_stages is not None:
                design_kwargs["n_stages"] = int(round(n_stages))
            xc = _parse_float(raw.get(schema.x_coord, ""))
            yc = _parse_float(raw.get(schema.y_coord, ""))
            env = {c: _parse_float(raw[c]) for c in schema.env_features}
            well_type = _canonical_label(raw.get(schema.well_type, "vertical"),
                                         schema.aliases)
            treatment = _canonical_label(
                raw.get(schema.treatment_type, "primary"), schema.aliases)
            try:
                wt = WellType(well_type)
            except ValueError:
                raise IngestionError(f"unknown well type {well_type!r}")
            try:
                tt = TreatmentType(treatment)
            except ValueError:
                raise IngestionError(f"unknown treatment type {treatment!r}")
            rows.append(WellRecord(
                well_id=raw[schema.well_id].strip(),
                field_id=_canonical_label(raw.get(schema.field_id, ""), schema.aliases),
                layer_id=_canonical_label(raw.get(schema.layer_id, ""), schema.aliases),
                face_id=_canonical_label(raw.get(schema.face_id, ""), schema.aliases),
                well_type=wt,
                treatment_type=tt,
                n_stages=int(n_stages) if n_stages is not None else 1,
                environment=env,
                design=DesignParams(**design_kwargs),
                production=_parse_series(raw.get(schema.production, "")),
                coordinates=(xc, yc) if xc is not None and yc is not None else None,
            ))
    return Dataset(feature_names=list(schema.env_features), rows=rows)


def _fmt(value: Optional[float]) -> str:
    if value is None:
        return ""
    return repr(float(value))


def _fmt_series(series: ProductionSeries) -> str:
    return ";".join(f"{repr(float(d))}:{repr(float(f))}"
                    for d, f in series.checkpoints)


def write_csv(dataset: Dataset, path: str | Path,
              schema: Optional[CsvSchema] = None) -> CsvSchema:
    """Export a dataset; re-ingesting reproduces all records exactly."""
    schema = schema or CsvSchema(env_features=list(dataset.feature_names))
    path = Path(path)
    header = [schema.well_id, schema.field_id, schema.layer_id, schema.face_id,
              schema.well_type, schema.treatment_type, schema.n_stages,
              schema.x_coord, schema.y_coord]
    header += [schema.design_columns[c] for c in _DESIGN_COLUMNS]
    header += list(schema.env_features) + [schema.production]
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for r in dataset:
            row = [r.well_id, r.field_id, r.layer_id, r.face_id,
                   r.well_type.value, r.treatment_type.value, str(r.n_stages)]
            if r.coordinates is None:
                row += ["", ""]
            else:
                row += [_fmt(r.coordinates[0]), _fmt(r.coordinates[1])]
            row += [_fmt(r.design.get(c)) for c in _DESIGN_COLUMNS]
            row += [_fmt(r.environment.get(c)) for c in schema.env_features]
            row.append(_fmt_series(r.production))
            writer.writerow(row)
    return schema
