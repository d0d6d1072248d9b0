from .attribution import Attribution, attribute, tree_attribution, tree_expected_value
from .correlation import midranks, spearman_corr
from .eliminate import eliminate, feature_columns, missing_fraction, variance
from .report import FeatureReport, FeatureStats, build_feature_report
from .rfe import RankedFeature, default_trainer, rfe
from .sobol import sobol_first_order

__all__ = [
    "Attribution", "attribute", "tree_attribution", "tree_expected_value",
    "midranks", "spearman_corr", "eliminate", "feature_columns",
    "missing_fraction", "variance", "FeatureReport", "FeatureStats",
    "build_feature_report", "RankedFeature", "default_trainer", "rfe",
    "sobol_first_order",
]
