"""Synthetic well generator with a known ground-truth response.

Stands in for a production database. The 90-day fluid target follows a
documented smooth response so that recovery of optima, clusters and uplift
can be scored against the truth:

    target = q_env(environment) + sum_k A_k * exp(-((u_k - m_k)^2) / (2 w_k^2))

where ``u`` is the design vector scaled to the global design ranges,
``q_env`` is an affine-plus-interaction reservoir-quality term, and the
per-parameter bump centers ``m`` are the design-space optimum. Gaussian
noise with standard deviation ``noise_frac * range(clean targets)`` is
added on top.

Wells fall into ``n_clusters`` latent environment clusters; cluster
membership drives the (layer, face) labels, coordinates and environment
feature distributions. ``label_noise`` re-labels a fraction of wells with
another cluster's labels, so label filtering alone cannot recover clusters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import ConfigError
from .records import (DESIGN_PARAMS, Dataset, DesignParams, ProductionSeries,
                      TreatmentType, WellRecord, WellType)

ENV_FEATURES = [
    "permeability_md",
    "porosity_frac",
    "net_pay_m",
    "reservoir_pressure_atm",
    "oil_viscosity_cp",
    "water_saturation_frac",
    "formation_depth_m",
    "gamma_ray_api",
]

FEATURE_UNITS = {
    "permeability_md": "mD",
    "porosity_frac": "frac",
    "net_pay_m": "m",
    "reservoir_pressure_atm": "atm",
    "oil_viscosity_cp": "cP",
    "water_saturation_frac": "frac",
    "formation_depth_m": "m",
    "gamma_ray_api": "API",
}

#: Global sampling ranges of the six design parameters.
GLOBAL_DESIGN_RANGES: dict[str, tuple[float, float]] = {
    "n_stages": (3.0, 12.0),
    "pad_share": (0.15, 0.45),
    "fluid_volume": (400.0, 1600.0),
    "proppant_mass": (1.0e5, 5.0e5),
    "fluid_rate": (3.0, 12.0),
    "final_prop_conc": (150.0, 1500.0),
}

#: Bump centers (scaled coordinates), amplitudes (m^3) and widths of the
#: design response. The center vector is the design-space optimum.
DESIGN_OPTIMUM_SCALED = np.array([0.65, 0.45, 0.55, 0.70, 0.50, 0.36])
DESIGN_BUMP_AMPLITUDE = np.array([380.0, 220.0, 340.0, 480.0, 180.0, 400.0])
DESIGN_BUMP_WIDTH = np.array([0.30, 0.35, 0.30, 0.28, 0.40, 0.30])

_CLUSTER_CENTERS = np.array([
    # perm  poro  pay  pres  visc   sw   depth  gamma
    [40.0, 0.14, 8.0, 220.0, 2.0, 0.35, 2500.0, 60.0],
    [140.0, 0.20, 15.0, 260.0, 1.0, 0.25, 2900.0, 90.0],
    [15.0, 0.10, 5.0, 190.0, 4.5, 0.45, 2100.0, 40.0],
])
_CLUSTER_SDS = np.array([6.0, 0.012, 1.2, 8.0, 0.3, 0.03, 60.0, 6.0])
_CLUSTER_LAYERS = ["bv8", "jv1", "ach3"]
_CLUSTER_FACES = ["slope_zone", "proximal_fan", "shallow_area"]
_CLUSTER_XY = np.array([[0.0, 0.0], [6000.0, 2000.0], [2000.0, 7000.0]])


@dataclass
class SyntheticSpec:
    """Knobs of the generator; defaults give a clean mid-size field."""

    n_clusters: int = 3
    noise_frac: float = 0.0          # sigma as fraction of clean-target range
    missing_fraction: float = 0.0    # fraction of environment cells masked
    label_noise: float = 0.0         # fraction of wells mislabeled
    refrac_fraction: float = 0.0     # fraction tagged as refracture jobs
    short_history_fraction: float = 0.0  # wells with < 90 days of history
    coordinate_scatter_m: float = 600.0

    def validate(self) -> None:
        if self.noise_frac < 0:
            raise ConfigError(f"noise_frac must be >= 0, got {self.noise_frac}")
        if not (0 <= self.missing_fraction < 1):
            raise ConfigError("missing_fraction must lie in [0, 1)")
        if not (0 <= self.label_noise <= 1):
            raise ConfigError("label_noise must lie in [0, 1]")
        if not (0 <= self.refrac_fraction <= 1):
            raise ConfigError("refrac_fraction must lie in [0, 1]")
        if not (0 <= self.short_history_fraction <= 1):
            raise ConfigError("short_history_fraction must lie in [0, 1]")
        if self.n_clusters < 1:
            raise ConfigError("n_clusters must be >= 1")


@dataclass
class SyntheticTruth:
    """Generator-side ground truth, keyed by well id (for scoring only)."""

    cluster_of: dict[str, int] = field(default_factory=dict)
    clean_target: dict[str, float] = field(default_factory=dict)
    spec: SyntheticSpec = field(default_factory=SyntheticSpec)


def design_bounds_arrays() -> tuple[np.ndarray, np.ndarray]:
    lo = np.array([GLOBAL_DESIGN_RANGES[p][0] for p in DESIGN_PARAMS])
    hi = np.array([GLOBAL_DESIGN_RANGES[p][1] for p in DESIGN_PARAMS])
    return lo, hi


def scale_design(design: np.ndarray) -> np.ndarray:
    lo, hi = design_bounds_arrays()
    return (np.asarray(design, dtype=float) - lo) / (hi - lo)


def design_response(design: np.ndarray) -> float | np.ndarray:
    """Sum of per-parameter Gaussian bumps, in m^3."""
    u = scale_design(design)
    z = (u - DESIGN_OPTIMUM_SCALED) / DESIGN_BUMP_WIDTH
    return (DESIGN_BUMP_AMPLITUDE * np.exp(-0.5 * z * z)).sum(axis=-1)


def env_quality(env: dict[str, Optional[float]]) -> float:
    """Reservoir-quality component of the response, in m^3."""
    perm = env["permeability_md"]
    poro = env["porosity_frac"]
    pay = env["net_pay_m"]
    pres = env["reservoir_pressure_atm"]
    visc = env["oil_viscosity_cp"]
    return float(600.0 + 11.0 * perm + 85.0 * pay + 2600.0 * poro
                 + 1.1 * (pres - 180.0) - 55.0 * visc + 0.05 * perm * pay)


def true_response(env: dict[str, Optional[float]], design: np.ndarray) -> float:
    return env_quality(env) + float(design_response(design))


def _cluster_params(n_clusters: int, rng: np.random.Generator):
    centers, layers, faces, xy = (_CLUSTER_CENTERS.copy(), list(_CLUSTER_LAYERS),
                                  list(_CLUSTER_FACES), _CLUSTER_XY.copy())
    while len(centers) < n_clusters:
        k = len(centers)
        jitter = rng.standard_normal(8) * _CLUSTER_SDS * 8.0
        centers = np.vstack([centers, _CLUSTER_CENTERS[k % 3] + jitter])
        layers.append(f"layer{k}")
        faces.append(_CLUSTER_FACES[k % 3])
        xy = np.vstack([xy, rng.uniform(0, 10000, 2)])
    return centers[:n_clusters], layers[:n_clusters], faces[:n_clusters], xy[:n_clusters]


def _series_for(target: float, rng: np.random.Generator,
                short: bool) -> ProductionSeries:
    """Monthly checkpoints with a linear ramp through (90 d, target)."""
    month_days = rng.integers(27, 32, size=6).astype(float)
    days = np.cumsum(month_days)
    rate = target / 90.0
    pts: list[tuple[float, float]] = []
    if short:
        for d in days[:2]:
            pts.append((float(d), float(rate * d)))
        return ProductionSeries(pts)
    slope_after = rate * 0.55
    kink = None
    for d in days:
        if kink is None:
            pts.append((float(d), float(rate * d)))
            if d >= 90.0:
                kink = (d, rate * d)
        else:
            pts.append((float(d), float(kink[1] + slope_after * (d - kink[0]))))
    return ProductionSeries(pts)


def generate_synthetic_detailed(n_wells: int, seed: int,
                                spec: Optional[SyntheticSpec] = None,
                                ) -> tuple[Dataset, SyntheticTruth]:
    """Deterministic generator returning the dataset plus scoring truth."""
    spec = spec or SyntheticSpec()
    spec.validate()
    if n_wells < 1:
        raise ConfigError("n_wells must be >= 1")
    rng = np.random.default_rng(seed)
    centers, layers, faces, xy = _cluster_params(spec.n_clusters, rng)

    lo, hi = design_bounds_arrays()
    truth = SyntheticTruth(spec=spec)
    rows: list[WellRecord] = []
    clean_targets = np.empty(n_wells)
    prelim = []
    for i in range(n_wells):
        cl = int(rng.integers(0, spec.n_clusters))
        env_vec = centers[cl] + rng.standard_normal(8) * _CLUSTER_SDS
        env = {name: float(v) for name, v in zip(ENV_FEATURES, env_vec)}

        n_stages = int(rng.integers(3, 13))
        pad_share = float(rng.uniform(0.15, 0.45))
        fluid_volume = float(rng.uniform(400.0, 1600.0))
        c_avg_draw = float(rng.uniform(150.0, 600.0))
        proppant_mass = float(np.clip(c_avg_draw * fluid_volume, 1.0e5, 5.0e5))
        fluid_rate = float(rng.uniform(3.0, 12.0))
        c_start = float(np.clip(rng.normal(80.0, 10.0), 50.0, 120.0))
        ramp = float(rng.uniform(0.4, 1.6))
        c_avg = proppant_mass / fluid_volume
        c_fin = float(np.clip(c_start + (1.0 + ramp) * max(c_avg - c_start, 20.0),
                              150.0, 1500.0))
        design_vec = np.array([n_stages, pad_share, fluid_volume,
                               proppant_mass, fluid_rate, c_fin])
        clean_targets[i] = true_response(env, design_vec)
        prelim.append((cl, env, n_stages, pad_share, fluid_volume,
                       proppant_mass, fluid_rate, c_start, c_fin))

    spread = float(clean_targets.max() - clean_targets.min()) if n_wells > 1 else 1.0
    noise = rng.standard_normal(n_wells) * spec.noise_frac * spread
    targets = np.maximum(clean_targets + noise, 1.0)

    for i, (cl, env, n_stages, pad_share, fluid_volume, proppant_mass,
            fluid_rate, c_start, c_fin) in enumerate(prelim):
        label_cl = cl
        if spec.label_noise > 0 and rng.random() < spec.label_noise and spec.n_clusters > 1:
            others = [k for k in range(spec.n_clusters) if k != cl]
            label_cl = int(others[rng.integers(0, len(others))])
        short = rng.random() < spec.short_history_fraction
        refrac = rng.random() < spec.refrac_fraction
        coords = xy[label_cl] + rng.standard_normal(2) * spec.coordinate_scatter_m
        well_id = f"w{i + 1:04d}"
        rows.append(WellRecord(
            well_id=well_id,
            field_id="f1",
            layer_id=layers[label_cl],
            face_id=faces[label_cl],
            well_type=WellType.HORIZONTAL if n_stages >= 6 else WellType.VERTICAL,
            treatment_type=TreatmentType.REFRACTURE if refrac else TreatmentType.PRIMARY,
            n_stages=n_stages,
            environment=env,
            design=DesignParams(
                n_stages=n_stages, pad_share=pad_share,
                fluid_volume=fluid_volume, proppant_mass=proppant_mass,
                fluid_rate=fluid_rate, final_prop_conc=c_fin,
                start_prop_conc=c_start),
            production=_series_for(float(targets[i]), rng, short),
            coordinates=(float(coords[0]), float(coords[1])),
        ))
        truth.cluster_of[well_id] = cl
        truth.clean_target[well_id] = float(clean_targets[i])

    if spec.missing_fraction > 0:
        mask = rng.random((n_wells, len(ENV_FEATURES))) < spec.missing_fraction
        for i, r in enumerate(rows):
            for j, name in enumerate(ENV_FEATURES):
                if mask[i, j]:
                    r.environment[name] = None

    return Dataset(feature_names=list(ENV_FEATURES), rows=rows), truth


def generate_synthetic(n_wells: int, seed: int,
                       spec: Optional[SyntheticSpec] = None) -> Dataset:
    dataset, _ = generate_synthetic_detailed(n_wells, seed, spec)
    return dataset
