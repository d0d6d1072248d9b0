from .matrix import (CATEGORICAL_COLUMNS, MatrixSchema, build_matrix,
                     record_vector, vector_for)
from .metrics import Metrics, compute_metrics
from .ridge import RidgeComponent, fit_ridge
from .stacked import (HyperPoint, StackedModel, default_grid, evaluate,
                      fit_stacked, grid_from_lists, split_holdout)
from .trees import (BoostedTreesComponent, BoostParams, RegressionTree,
                    build_tree, fit_boosted)

__all__ = [
    "CATEGORICAL_COLUMNS", "MatrixSchema", "build_matrix", "record_vector",
    "vector_for", "Metrics", "compute_metrics", "RidgeComponent", "fit_ridge",
    "HyperPoint", "StackedModel", "default_grid", "evaluate", "fit_stacked",
    "grid_from_lists", "split_holdout", "BoostedTreesComponent", "BoostParams",
    "RegressionTree", "build_tree", "fit_boosted",
]
