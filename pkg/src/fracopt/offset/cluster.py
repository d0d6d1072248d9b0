"""Pilot-cluster construction and similarity search."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import InputError, InsufficientAnaloguesError
from ..welldata.normalize import fit_normalizer, scale_value
from ..welldata.records import DESIGN_PARAMS, Dataset, WellRecord
from ..welldata.targets import target_90d
from .density import NOISE
from .impute import AlsConfig, als_complete
from .tuning import ClusteringChoice, tune_clustering

MIN_ANALOGUES = 5


@dataclass
class ParamBounds:
    lower: float   # 5th percentile over cluster members
    upper: float   # 95th percentile
    mean: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.lower, self.mean, self.upper)


@dataclass
class PilotCluster:
    pilot_id: str
    member_ids: list[str]
    bounds: dict[str, ParamBounds]
    start_conc_mean: Optional[float] = None
    eps: Optional[float] = None
    min_pts: Optional[int] = None
    silhouette: Optional[float] = None
    fallback: bool = False
    n_filtered: int = 0
    used_features: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"pilot_id": self.pilot_id, "member_ids": self.member_ids,
                "bounds": {k: vars(v) for k, v in self.bounds.items()},
                "start_conc_mean": self.start_conc_mean,
                "eps": self.eps, "min_pts": self.min_pts,
                "silhouette": self.silhouette, "fallback": self.fallback,
                "n_filtered": self.n_filtered,
                "used_features": self.used_features}


@dataclass
class TopNResult:
    entries: list[tuple[str, float]]     # (well_id, distance), ascending
    used_features: list[str]


def euclidean_topn(pilot_vec: dict[str, Optional[float]],
                   candidates: list[tuple[str, dict[str, Optional[float]]]],
                   n: int) -> TopNResult:
    """Closest candidates to the pilot in normalized feature space.

    Features the pilot is missing are dropped from the metric; the list of
    features actually used is reported back.
    """
    used = [k for k, v in pilot_vec.items() if v is not None]
    if not used:
        raise InputError("no shared features available for the distance metric")
    p = np.array([pilot_vec[k] for k in used], dtype=float)
    scored = []
    for well_id, vec in candidates:
        vals = [vec.get(k) for k in used]
        if any(v is None for v in vals):
            raise InputError(
                f"candidate {well_id!r} is missing features {used}; impute first")
        d = float(np.sqrt(((np.array(vals, dtype=float) - p) ** 2).sum()))
        scored.append((d, well_id))
    scored.sort()
    n = max(0, min(n, len(scored)))
    return TopNResult(entries=[(w, d) for d, w in scored[:n]],
                      used_features=used)


def _filter_analogues(dataset: Dataset, pilot: WellRecord) -> list[WellRecord]:
    steps = [
        ("field_id", lambda r: r.field_id == pilot.field_id),
        ("layer_id", lambda r: r.layer_id == pilot.layer_id),
        ("face_id", lambda r: r.face_id == pilot.face_id),
        ("n_stages within +/-1", lambda r: abs(r.n_stages - pilot.n_stages) <= 1),
    ]
    rows = [r for r in dataset if r.well_id != pilot.well_id]
    for name, pred in steps:
        rows = [r for r in rows if pred(r)]
        if len(rows) < MIN_ANALOGUES:
            raise InsufficientAnaloguesError(
                f"filter {name!r} left {len(rows)} wells "
                f"(need >= {MIN_ANALOGUES}) for pilot {pilot.well_id!r}")
    return rows


def normalized_env_matrix(rows: list[WellRecord], feature_names: list[str],
                          stats: dict[str, tuple[float, float]]) -> np.ndarray:
    out = np.full((len(rows), len(feature_names)), np.nan)
    for i, r in enumerate(rows):
        for j, name in enumerate(feature_names):
            v = scale_value(r.environment.get(name), *stats[name])
            if v is not None:
                out[i, j] = v
    return out


def build_pilot_cluster(dataset: Dataset, pilot: WellRecord,
                        n_euclid: Optional[int] = None,
                        search_budget: int = 60, seed: int = 0,
                        ) -> tuple[PilotCluster, ClusteringChoice, list[WellRecord]]:
    """Filter, cluster, optionally truncate to top-N, then derive bounds.

    Returns the cluster summary, the tuned clustering (for plots) and the
    member records.
    """
    if not pilot.layer_id or not pilot.face_id:
        raise InputError("pilot must carry layer and face labels")
    rows = _filter_analogues(dataset, pilot)
    stats = dataset.normalization_stats or fit_normalizer(dataset)

    M = normalized_env_matrix(rows + [pilot], dataset.feature_names, stats)
    if np.isnan(M).any():
        M = als_complete(M, AlsConfig(seed=seed))
    if len(M) < 10:
        # too few analogues to tune density clustering; keep them all
        choice = ClusteringChoice(eps=0.0, min_pts=0, silhouette=None,
                                  labels=np.zeros(len(M), dtype=int),
                                  fallback=True)
    else:
        choice = tune_clustering(M, search_budget=search_budget,
                                 pilot_index=len(rows), seed=seed)
    if choice.fallback:
        members = list(rows)
    else:
        pilot_label = choice.labels[len(rows)]
        members = [r for r, lab in zip(rows, choice.labels[:-1])
                   if lab == pilot_label and lab != NOISE]
        if not members:
            members = list(rows)

    used_features = list(dataset.feature_names)
    if n_euclid is not None and 0 < n_euclid < len(members):
        pilot_vec = {name: M[len(rows), j]
                     for j, name in enumerate(dataset.feature_names)}
        index = {r.well_id: r for r in members}
        row_pos = {r.well_id: i for i, r in enumerate(rows)}
        cands = [(r.well_id,
                  {name: M[row_pos[r.well_id], j]
                   for j, name in enumerate(dataset.feature_names)})
                 for r in members]
        top = euclidean_topn(pilot_vec, cands, n_euclid)
        members = [index[w] for w, _ in top.entries]
        used_features = top.used_features

    bounds: dict[str, ParamBounds] = {}
    for param in DESIGN_PARAMS:
        vals = [r.design.get(param) for r in members]
        vals = [float(v) for v in vals if v is not None]
        if not vals:
            continue
        arr = np.asarray(vals)
        bounds[param] = ParamBounds(
            lower=float(np.percentile(arr, 5, method="linear")),
            upper=float(np.percentile(arr, 95, method="linear")),
            mean=float(arr.mean()))
    starts = [r.design.start_prop_conc for r in members
              if r.design.start_prop_conc is not None]
    cluster = PilotCluster(
        pilot_id=pilot.well_id,
        member_ids=[r.well_id for r in members],
        bounds=bounds,
        start_conc_mean=float(np.mean(starts)) if starts else None,
        eps=choice.eps, min_pts=choice.min_pts,
        silhouette=choice.silhouette, fallback=choice.fallback,
        n_filtered=len(rows), used_features=used_features)
    return cluster, choice, members


@dataclass
class NeighborFeatures:
    prod_per_distance: Optional[float]   # mean of (90-day fluid / distance), m^3/m
    neighbor_count: int


def neighbor_features(dataset: Dataset, pilot: WellRecord,
                      radius: float = 1000.0) -> NeighborFeatures:
    """Production-weighted vicinity signal over wells within ``radius`` m."""
    if pilot.coordinates is None:
        return NeighborFeatures(prod_per_distance=None, neighbor_count=0)
    px, py = pilot.coordinates
    ratios = []
    count = 0
    for r in dataset:
        if r.well_id == pilot.well_id or r.coordinates is None:
            continue
        d = float(np.hypot(r.coordinates[0] - px, r.coordinates[1] - py))
        if d <= 0 or d > radius:
            continue
        count += 1
        if len(r.production) == 0:
            continue
        t = target_90d(r.production)
        if t is not None:
            ratios.append(t / d)
    if not ratios:
        return NeighborFeatures(prod_per_distance=None, neighbor_count=count)
    return NeighborFeatures(prod_per_distance=float(np.mean(ratios)),
                            neighbor_count=count)
