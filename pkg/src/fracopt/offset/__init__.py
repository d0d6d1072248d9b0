from .cluster import (NeighborFeatures, ParamBounds, PilotCluster, TopNResult,
                      build_pilot_cluster, euclidean_topn, neighbor_features,
                      normalized_env_matrix)
from .density import NOISE, dbscan
from .embed import Embedding2D, export_scatter, predict_coords, tsne_embed
from .impute import (AlsConfig, ImputationReport, ImputeContext, als_complete,
                     impute)
from .silhouette import silhouette_mean
from .tuning import ClusteringChoice, tune_clustering

__all__ = [
    "NeighborFeatures", "ParamBounds", "PilotCluster", "TopNResult",
    "build_pilot_cluster", "euclidean_topn", "neighbor_features",
    "normalized_env_matrix", "NOISE", "dbscan", "Embedding2D",
    "export_scatter", "predict_coords", "tsne_embed", "AlsConfig",
    "ImputationReport", "ImputeContext", "als_complete", "impute",
    "silhouette_mean", "ClusteringChoice", "tune_clustering",
]
