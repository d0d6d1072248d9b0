from .de import DeConfig, optimize_de
from .gp import GPSurrogate, acquisition, acquisition_batch, gp_fit, gp_predict
from .local import optimize_local, polish
from .problem import (DEFAULT_C_START, EPSILON_INTERVAL, Evaluator,
                      FeasibilityReport, OptimizationProblem,
                      OptimizationResult, TraceEntry, epsilon, feasible,
                      initial_point, sample_feasible, total_violation)
from .pso import PsoConfig, optimize_pso
from .recommend import (METHODS, PilotSetup, RecommendOutcome,
                        RetrospectiveOutcome, design_vector, percent_of_bounds,
                        prepare_pilot, recommend, retrospective)
from .sbo import SboConfig, optimize_sbo

__all__ = [
    "DeConfig", "optimize_de", "GPSurrogate", "acquisition",
    "acquisition_batch", "gp_fit", "gp_predict", "optimize_local", "polish",
    "DEFAULT_C_START", "EPSILON_INTERVAL", "Evaluator", "FeasibilityReport",
    "OptimizationProblem", "OptimizationResult", "TraceEntry", "epsilon",
    "feasible", "initial_point", "sample_feasible", "total_violation",
    "PsoConfig", "optimize_pso", "METHODS", "PilotSetup", "RecommendOutcome",
    "RetrospectiveOutcome", "design_vector", "percent_of_bounds",
    "prepare_pilot", "recommend", "retrospective", "SboConfig", "optimize_sbo",
]
