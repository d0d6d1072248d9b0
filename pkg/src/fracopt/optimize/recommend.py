"""End-to-end design recommendation and retrospective uplift analysis."""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from ..errors import ConfigError, InputError
from ..model.matrix import vector_for
from ..model.stacked import StackedModel
from ..offset.cluster import (PilotCluster, build_pilot_cluster, euclidean_topn,
                              normalized_env_matrix)
from ..offset.impute import ImputationReport, ImputeContext, impute
from ..welldata.normalize import fit_normalizer
from ..welldata.records import DESIGN_PARAMS, Dataset, DesignParams, WellRecord
from .de import optimize_de
from .local import optimize_local
from .problem import (DEFAULT_C_START, EPSILON_INTERVAL, OptimizationProblem,
                      OptimizationResult)
from .pso import optimize_pso
from .sbo import SboConfig, optimize_sbo

METHODS: dict[str, Callable[..., OptimizationResult]] = {
    "de": optimize_de,
    "pso": optimize_pso,
    "local": optimize_local,
    "sbo": optimize_sbo,
}

_I_MASS = DESIGN_PARAMS.index("proppant_mass")


@dataclass
class PilotSetup:
    """Frozen context shared by all optimizer runs for one pilot."""

    cluster: PilotCluster
    environment: dict[str, float]
    labels: dict[str, str]
    imputation: ImputationReport
    objective: Callable[[np.ndarray], float]
    lower: np.ndarray
    upper: np.ndarray
    x0: np.ndarray
    c_start: float


@dataclass
class RecommendOutcome:
    setup: PilotSetup
    results: dict[str, OptimizationResult]
    table: list[dict] = field(default_factory=list)


@dataclass
class RetrospectiveOutcome:
    uplift_pct: float
    predicted_actual: float
    result: OptimizationResult
    relaxed_bounds: bool
    relaxed_ramp: bool


def percent_of_bounds(design: np.ndarray, lower: np.ndarray,
                      upper: np.ndarray) -> list[float]:
    """Recommended values on a 0..100 scale between the bounds."""
    return [float((v - lo) / (hi - lo) * 100.0)
            for v, lo, hi in zip(design, lower, upper)]


def prepare_pilot(dataset: Dataset, model: StackedModel, pilot: WellRecord,
                  n_top_impute: int = 10, n_euclid: Optional[int] = None,
                  seed: int = 0, impute_strategy: str = "topn_mean",
                  ) -> PilotSetup:
    """Build bounds from offsets, impute pilot gaps, freeze the environment."""
    stats = dataset.normalization_stats or fit_normalizer(dataset)
    cluster, _, members = build_pilot_cluster(dataset, pilot,
                                              n_euclid=n_euclid, seed=seed)

    env_names = dataset.feature_names
    M = normalized_env_matrix(members + [pilot], env_names, stats)
    pilot_vec = {name: (None if np.isnan(M[-1, j]) else float(M[-1, j]))
                 for j, name in enumerate(env_names)}
    donors: list[dict] = []
    if any(v is not None for v in pilot_vec.values()):
        cands = []
        for i, r in enumerate(members):
            vec = {name: (None if np.isnan(M[i, j]) else float(M[i, j]))
                   for j, name in enumerate(env_names)}
            cands.append((r.well_id, vec))
        try:
            top = euclidean_topn(pilot_vec, cands, n_top_impute)
            by_id = {r.well_id: r for r in members}
            donors = [dict(by_id[w].environment) for w, _ in top.entries]
        except InputError:
            donors = [dict(r.environment) for r in members[:n_top_impute]]
    else:
        donors = [dict(r.environment) for r in members[:n_top_impute]]

    global_means = {}
    for name in env_names:
        vals = [r.environment.get(name) for r in dataset]
        vals = [v for v in vals if v is not None]
        if vals:
            global_means[name] = float(np.mean(vals))
    cluster_means = {}
    for name in env_names:
        vals = [r.environment.get(name) for r in members]
        vals = [v for v in vals if v is not None]
        if vals:
            cluster_means[name] = float(np.mean(vals))
    ctx = ImputeContext(donor_rows=donors, cluster_means=cluster_means,
                        global_means=global_means, normalization_stats=stats)
    env_raw = {name: pilot.environment.get(name) for name in env_names}
    env_full, report = impute(env_raw, impute_strategy, ctx)

    missing_bounds = [p for p in DESIGN_PARAMS if p not in cluster.bounds]
    if missing_bounds:
        raise InputError(
            f"cluster gives no bounds for design parameters {missing_bounds}")
    lower = np.array([cluster.bounds[p].lower for p in DESIGN_PARAMS])
    upper = np.array([cluster.bounds[p].upper for p in DESIGN_PARAMS])
    x0 = np.array([cluster.bounds[p].mean for p in DESIGN_PARAMS])
    labels = {"field_id": pilot.field_id, "layer_id": pilot.layer_id,
              "face_id": pilot.face_id, "well_type": pilot.well_type.value}

    def objective(design: np.ndarray) -> float:
        return model.predict(vector_for(model.schema, env_full, design, labels))

    c_start = (pilot.design.start_prop_conc
               or cluster.start_conc_mean or DEFAULT_C_START)
    return PilotSetup(cluster=cluster, environment=env_full, labels=labels,
                      imputation=report, objective=objective, lower=lower,
                      upper=upper, x0=x0, c_start=float(c_start))


def _problem_from_setup(setup: PilotSetup, budget: int,
                        proppant_cap: Optional[float] = None,
                        epsilon_interval: tuple[float, float] = EPSILON_INTERVAL,
                        ) -> OptimizationProblem:
    lower = setup.lower.copy()
    upper = setup.upper.copy()
    x0 = setup.x0.copy()
    if proppant_cap is not None:
        upper[_I_MASS] = min(upper[_I_MASS], proppant_cap)
        # a cap at/below the offset-derived floor still permits lighter jobs
        lower[_I_MASS] = min(lower[_I_MASS], 0.98 * upper[_I_MASS])
        x0[_I_MASS] = min(x0[_I_MASS], upper[_I_MASS])
    return OptimizationProblem(
        objective=setup.objective, lower=setup.lower.copy(), upper=upper,
        budget=budget, epsilon_interval=epsilon_interval,
        c_start=setup.c_start, proppant_cap=proppant_cap, x0=x0,
        integer_indices=(DESIGN_PARAMS.index("n_stages"),))


def recommend(dataset: Dataset, model: StackedModel, pilot: WellRecord,
              methods: Optional[list[str]] = None, seed: int = 0,
              budget: int = 200, n_euclid: Optional[int] = None,
              acquisition_kind: str = "EI") -> RecommendOutcome:
    """Run every requested optimizer on the same frozen pilot problem."""
    methods = methods or list(METHODS)
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise ConfigError(f"unknown optimization methods {unknown}")
    setup = prepare_pilot(dataset, model, pilot, seed=seed, n_euclid=n_euclid)
    results: dict[str, OptimizationResult] = {}
    for name in methods:
        problem = _problem_from_setup(setup, budget)
        if name == "sbo":
            results[name] = optimize_sbo(problem, seed=seed,
                                         config=SboConfig(kind=acquisition_kind))
        else:
            results[name] = METHODS[name](problem, seed=seed)

    table = []
    for name in methods:
        res = results[name]
        row = {"method": name, "feasible": res.feasible,
               "best_value_m3": res.best_value,
               "n_evaluations": res.n_evaluations}
        if res.best_design is not None:
            pct = percent_of_bounds(res.best_design, setup.lower, setup.upper)
            for p, v, share in zip(DESIGN_PARAMS, res.best_design, pct):
                row[p] = float(v)
                row[f"{p}_pct_of_bounds"] = share
        table.append(row)
    return RecommendOutcome(setup=setup, results=results, table=table)


def design_vector(design: DesignParams) -> np.ndarray:
    vals = []
    for p in DESIGN_PARAMS:
        v = design.get(p)
        if v is None:
            raise InputError(f"actual design is missing {p!r}")
        vals.append(float(v))
    return np.array(vals)


def retrospective(dataset: Dataset, model: StackedModel, pilot: WellRecord,
                  actual_design: DesignParams, seed: int = 0,
                  budget: int = 200) -> RetrospectiveOutcome:
    """Optimize with proppant mass capped at the actual job's value.

    The actual design is seeded into the surrogate optimizer's initial
    sample, so the reported uplift is never negative. If the actual design
    falls outside the offset-derived box (or ramp interval), bounds are
    relaxed to include it and the outcome is flagged.
    """
    t0 = time.monotonic()
    setup = prepare_pilot(dataset, model, pilot, seed=seed)
    actual = design_vector(actual_design)

    lower, upper = setup.lower.copy(), setup.upper.copy()
    relaxed_bounds = bool((actual < lower).any() or (actual > upper).any())
    lower = np.minimum(lower, actual)
    upper = np.maximum(upper, actual)

    cap = float(actual[_I_MASS])
    eps_lo, eps_hi = EPSILON_INTERVAL
    c_avg = actual[_I_MASS] / actual[DESIGN_PARAMS.index("fluid_volume")]
    relaxed_ramp = False
    eps_interval: Optional[tuple[float, float]] = (eps_lo, eps_hi)
    if c_avg > setup.c_start:
        actual_eps = ((actual[DESIGN_PARAMS.index("final_prop_conc")]
                       - setup.c_start) / (c_avg - setup.c_start)) - 1.0
        if not (eps_lo <= actual_eps <= eps_hi):
            eps_interval = (min(eps_lo, actual_eps), max(eps_hi, actual_eps))
            relaxed_ramp = True
    else:
        # ramp undefined for the actual job; drop the constraint entirely
        relaxed_ramp = True
        eps_interval = None

    setup = replace(setup, lower=lower, upper=upper)
    problem = _problem_from_setup(setup, budget, proppant_cap=cap,
                                  epsilon_interval=eps_interval)
    result = optimize_sbo(problem, seed=seed, seed_designs=[actual])
    result.wall_time_s = time.monotonic() - t0

    predicted_actual = float(setup.objective(problem.round_integers(actual)))
    if result.best_value is None:
        uplift = 0.0
    else:
        uplift = (result.best_value - predicted_actual) / predicted_actual * 100.0
    return RetrospectiveOutcome(uplift_pct=float(uplift),
                                predicted_actual=predicted_actual,
                                result=result, relaxed_bounds=relaxed_bounds,
                                relaxed_ramp=relaxed_ramp)
