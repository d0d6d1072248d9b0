"""Core well-treatment data model.

A dataset is an immutable-by-convention collection of well treatment
records sharing one environment-feature schema. Missing numeric values are
represented as ``None`` throughout (never NaN), so equality and round-trip
checks stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Optional

from ..errors import IngestionError, SchemaError


class WellType(str, Enum):
    VERTICAL = "vertical"
    HORIZONTAL = "horizontal"
    VERTICAL_MULTILATERAL = "vertical_multilateral"


class TreatmentType(str, Enum):
    PRIMARY = "primary"
    REFRACTURE = "refracture"


#: Ordered names of the six controllable design parameters.
DESIGN_PARAMS = (
    "n_stages",
    "pad_share",
    "fluid_volume",
    "proppant_mass",
    "fluid_rate",
    "final_prop_conc",
)


@dataclass
class DesignParams:
    """Pumping-schedule description of one fracturing treatment.

    ``avg_prop_conc`` is always derived from ``proppant_mass`` and
    ``fluid_volume``; it is intentionally not a stored field.
    """

    n_stages: Optional[int] = None
    pad_share: Optional[float] = None          # fraction of total volume
    fluid_volume: Optional[float] = None       # m^3
    proppant_mass: Optional[float] = None      # kg
    fluid_rate: Optional[float] = None         # m^3/min
    final_prop_conc: Optional[float] = None    # kg/m^3
    start_prop_conc: Optional[float] = None    # kg/m^3

    def __post_init__(self) -> None:
        if self.n_stages is not None and self.n_stages < 1:
            raise IngestionError(f"n_stages must be >= 1, got {self.n_stages}")
        if self.pad_share is not None and not (0.0 <= self.pad_share <= 1.0):
            raise IngestionError(f"pad_share must lie in [0,1], got {self.pad_share}")
        for name in ("fluid_volume", "proppant_mass", "fluid_rate",
                     "final_prop_conc", "start_prop_conc"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise IngestionError(f"{name} must be positive, got {v}")

    @property
    def avg_prop_conc(self) -> Optional[float]:
        """Mean proppant concentration over the whole job, kg/m^3."""
        if self.proppant_mass is None or self.fluid_volume is None:
            return None
        return self.proppant_mass / self.fluid_volume

    def get(self, name: str) -> Optional[float]:
        if name == "avg_prop_conc":
            return self.avg_prop_conc
        if name not in DESIGN_PARAMS and name != "start_prop_conc":
            raise SchemaError(f"unknown design parameter {name!r}")
        return getattr(self, name)


@dataclass
class ProductionSeries:
    """Cumulative production checkpoints: (active days, fluid m^3) pairs."""

    checkpoints: list[tuple[float, float]] = field(default_factory=list)

    def __post_init__(self) -> None:
        days = [c[0] for c in self.checkpoints]
        fluid = [c[1] for c in self.checkpoints]
        if any(b < a for a, b in zip(days, days[1:])):
            raise IngestionError("cumulative active days must be non-decreasing")
        if any(b < a for a, b in zip(fluid, fluid[1:])):
            raise IngestionError("cumulative fluid must be non-decreasing")

    def __len__(self) -> int:
        return len(self.checkpoints)


@dataclass
class WellRecord:
    well_id: str
    field_id: str = ""
    layer_id: str = ""
    face_id: str = ""
    well_type: WellType = WellType.VERTICAL
    treatment_type: TreatmentType = TreatmentType.PRIMARY
    n_stages: int = 1
    environment: dict[str, Optional[float]] = field(default_factory=dict)
    design: DesignParams = field(default_factory=DesignParams)
    production: ProductionSeries = field(default_factory=ProductionSeries)
    coordinates: Optional[tuple[float, float]] = None  # planar position, m

    def __post_init__(self) -> None:
        if self.n_stages < 1:
            raise IngestionError(
                f"well {self.well_id!r}: n_stages must be >= 1, got {self.n_stages}")


@dataclass
class Dataset:
    """Well records plus their shared environment-feature schema.

    ``normalization_stats`` maps feature name -> (p1, p99) and is present
    only after :func:`fracopt.welldata.normalize.fit_normalizer` ran.
    """

    feature_names: list[str]
    rows: list[WellRecord] = field(default_factory=list)
    normalization_stats: Optional[dict[str, tuple[float, float]]] = None

    def __post_init__(self) -> None:
        seen: set[str] = set()
        dups = sorted({r.well_id for r in self.rows
                       if r.well_id in seen or seen.add(r.well_id)})
        if dups:
            raise IngestionError(f"duplicate well ids: {', '.join(dups)}")
        schema = set(self.feature_names)
        for r in self.rows:
            unknown = set(r.environment) - schema
            if unknown:
                raise SchemaError(
                    f"well {r.well_id!r} carries features outside the shared "
                    f"schema: {sorted(unknown)}")
        if self.normalization_stats is not None:
            for name, (p1, p99) in self.normalization_stats.items():
                if p1 > p99:
                    raise SchemaError(f"feature {name!r}: p1 > p99")

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def by_id(self, well_id: str) -> WellRecord:
        for r in self.rows:
            if r.well_id == well_id:
                return r
        raise KeyError(well_id)

    def subset(self, rows: Iterable[WellRecord]) -> "Dataset":
        return replace(self, rows=list(rows))


def split_primary_refrac(dataset: Dataset) -> tuple[Dataset, Dataset]:
    """Partition a dataset by treatment type: (primary, refracture)."""
    primary = [r for r in dataset if r.treatment_type == TreatmentType.PRIMARY]
    refrac = [r for r in dataset if r.treatment_type == TreatmentType.REFRACTURE]
    return dataset.subset(primary), dataset.subset(refrac)
