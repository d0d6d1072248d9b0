from .ingest import CsvSchema, ingest_csv, write_csv
from .normalize import apply_normalizer, fit_normalizer, percentile, scale_value
from .records import (DESIGN_PARAMS, Dataset, DesignParams, ProductionSeries,
                      TreatmentType, WellRecord, WellType, split_primary_refrac)
from .synthetic import (ENV_FEATURES, FEATURE_UNITS, GLOBAL_DESIGN_RANGES,
                        SyntheticSpec, SyntheticTruth, generate_synthetic,
                        generate_synthetic_detailed, true_response)
from .targets import TARGET_HORIZON_DAYS, target_90d

__all__ = [
    "CsvSchema", "ingest_csv", "write_csv",
    "apply_normalizer", "fit_normalizer", "percentile", "scale_value",
    "DESIGN_PARAMS", "Dataset", "DesignParams", "ProductionSeries",
    "TreatmentType", "WellRecord", "WellType", "split_primary_refrac",
    "ENV_FEATURES", "FEATURE_UNITS", "GLOBAL_DESIGN_RANGES",
    "SyntheticSpec", "SyntheticTruth", "generate_synthetic",
    "generate_synthetic_detailed", "true_response",
    "TARGET_HORIZON_DAYS", "target_90d",
]
