"""Inverse-problem definition: objective, box bounds and ramp constraint.

Design vectors follow the order of
:data:`fracopt.welldata.records.DESIGN_PARAMS`:
(n_stages, pad_share, fluid_volume, proppant_mass, fluid_rate,
final_prop_conc). The stage count is relaxed to a float during search and
rounded (then clamped into the integer-feasible range) at evaluation time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..errors import ConfigError, InputError
from ..welldata.records import DESIGN_PARAMS

EPSILON_INTERVAL = (0.5, 1.5)
DEFAULT_C_START = 80.0   # kg/m^3, used when no cluster mean is available
PENALTY_SCALE = 1.0e6

_I_STAGES = DESIGN_PARAMS.index("n_stages")
_I_VOLUME = DESIGN_PARAMS.index("fluid_volume")
_I_MASS = DESIGN_PARAMS.index("proppant_mass")
_I_CFIN = DESIGN_PARAMS.index("final_prop_conc")


def epsilon(c_start: float, c_fin: float, c_avg: float) -> Optional[float]:
    """Proppant-ramp steepness; ``None`` when undefined (c_avg <= c_start)."""
    if c_avg <= c_start:
        return None
    return (c_fin - c_start) / (c_avg - c_start) - 1.0


@dataclass
class OptimizationProblem:
    objective: Callable[[np.ndarray], float]
    lower: np.ndarray
    upper: np.ndarray
    budget: int = 200
    variable_names: tuple[str, ...] = DESIGN_PARAMS
    epsilon_interval: Optional[tuple[float, float]] = None
    c_start: Optional[float] = None
    proppant_cap: Optional[float] = None
    x0: Optional[np.ndarray] = None
    integer_indices: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        if self.lower.shape != self.upper.shape:
            raise ConfigError("bound arrays must have equal shape")
        if not (self.lower < self.upper).all():
            bad = [self.variable_names[i] if i < len(self.variable_names) else i
                   for i in np.flatnonzero(self.lower >= self.upper)]
            raise ConfigError(f"lower >= upper for variables {bad}")
        if self.budget < 10:
            raise ConfigError("evaluation budget must be >= 10")
        if self.epsilon_interval is not None and self.c_start is None:
            raise ConfigError("ramp constraint requires c_start")

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def has_ramp_constraint(self) -> bool:
        return self.epsilon_interval is not None

    def round_integers(self, x: np.ndarray) -> np.ndarray:
        """Snap integer variables to the nearest in-bounds integer."""
        if not self.integer_indices:
            return x
        out = x.copy()
        for i in self.integer_indices:
            lo, hi = math.ceil(self.lower[i]), math.floor(self.upper[i])
            if lo > hi:
                raise ConfigError(
                    f"no feasible integer for {self.variable_names[i]!r}")
            out[i] = min(max(round(float(x[i])), lo), hi)
        return out

    def design_epsilon(self, x: np.ndarray) -> Optional[float]:
        if self.c_start is None:
            return None
        c_avg = x[_I_MASS] / x[_I_VOLUME]
        return epsilon(self.c_start, x[_I_CFIN], c_avg)

    def repair_ramp(self, x: np.ndarray, target: float = 1.0) -> np.ndarray:
        """Project onto the ramp constraint by adjusting final concentration.

        The ramp is linear in c_fin for fixed mass/volume, so the repair is
        exact; c_fin is then clamped back into its own box.
        """
        if not self.has_ramp_constraint:
            return x
        out = x.copy()
        eps = self.design_epsilon(out)
        lo, hi = self.epsilon_interval
        if eps is not None and lo <= eps <= hi:
            return out
        c_avg = out[_I_MASS] / out[_I_VOLUME]
        if c_avg <= self.c_start:
            return out    # undefined ramp cannot be repaired through c_fin
        c_fin = self.c_start + (1.0 + target) * (c_avg - self.c_start)
        out[_I_CFIN] = float(np.clip(c_fin, self.lower[_I_CFIN],
                                     self.upper[_I_CFIN]))
        return out


@dataclass
class Violation:
    name: str
    margin: float    # distance to satisfaction; negative when violated


@dataclass
class FeasibilityReport:
    ok: bool
    violations: list[Violation] = field(default_factory=list)


def feasible(design: np.ndarray, problem: OptimizationProblem,
             ) -> FeasibilityReport:
    """Check box bounds, the ramp interval and the optional mass cap."""
    x = np.asarray(design, dtype=float)
    violations: list[Violation] = []
    for i, name in enumerate(problem.variable_names[:problem.dim]):
        if x[i] < problem.lower[i]:
            violations.append(Violation(f"{name} >= lower", x[i] - problem.lower[i]))
        if x[i] > problem.upper[i]:
            violations.append(Violation(f"{name} <= upper", problem.upper[i] - x[i]))
    if problem.has_ramp_constraint:
        eps = problem.design_epsilon(x)
        lo, hi = problem.epsilon_interval
        if eps is None:
            violations.append(Violation("ramp defined (c_avg > c_start)",
                                        -math.inf))
        else:
            if eps < lo:
                violations.append(Violation("ramp >= interval lower", eps - lo))
            if eps > hi:
                violations.append(Violation("ramp <= interval upper", hi - eps))
    if problem.proppant_cap is not None and x[_I_MASS] > problem.proppant_cap:
        violations.append(Violation("proppant mass cap",
                                    problem.proppant_cap - x[_I_MASS]))
    return FeasibilityReport(ok=not violations, violations=violations)


def total_violation(design: np.ndarray, problem: OptimizationProblem) -> float:
    rep = feasible(design, problem)
    total = 0.0
    for v in rep.violations:
        total += 1.0 if not math.isfinite(v.margin) else -v.margin
    return total


@dataclass
class TraceEntry:
    design: np.ndarray
    value: float
    feasible: bool

    def to_dict(self) -> dict:
        return {"design": [float(v) for v in self.design],
                "value": self.value, "feasible": self.feasible}


@dataclass
class OptimizationResult:
    method: str
    best_design: Optional[np.ndarray]
    best_value: Optional[float]
    trace: list[TraceEntry]
    feasible: bool
    wall_time_s: float = 0.0
    warnings: list[str] = field(default_factory=list)

    @property
    def n_evaluations(self) -> int:
        return len(self.trace)

    def to_dict(self, include_wall_time: bool = False) -> dict:
        # wall time is excluded by default so run artifacts stay
        # byte-identical across replays
        d = {"method": self.method,
             "best_design": ([float(v) for v in self.best_design]
                             if self.best_design is not None else None),
             "best_value": self.best_value,
             "feasible": self.feasible,
             "n_evaluations": self.n_evaluations,
             "warnings": self.warnings,
             "trace": [t.to_dict() for t in self.trace]}
        if include_wall_time:
            d["wall_time_s"] = self.wall_time_s
        return d


class BudgetExhausted(Exception):
    pass


class Evaluator:
    """Budgeted objective wrapper shared by every optimizer.

    Rounds integer variables, records the trace and maintains the running
    feasible best and the penalized fitness used by population methods.
    """

    def __init__(self, problem: OptimizationProblem):
        self.problem = problem
        self.trace: list[TraceEntry] = []

    @property
    def evaluations(self) -> int:
        return len(self.trace)

    @property
    def remaining(self) -> int:
        return self.problem.budget - self.evaluations

    def __call__(self, x: np.ndarray) -> tuple[float, float, bool]:
        """Returns (raw value, penalized fitness, feasible flag)."""
        if self.remaining <= 0:
            raise BudgetExhausted()
        x_eval = self.problem.round_integers(np.asarray(x, dtype=float))
        value = float(self.problem.objective(x_eval))
        viol = total_violation(x_eval, self.problem)
        ok = viol == 0.0
        self.trace.append(TraceEntry(design=x_eval.copy(), value=value,
                                     feasible=ok))
        return value, value - PENALTY_SCALE * viol, ok

    def result(self, method: str, warnings: Optional[list[str]] = None,
               ) -> OptimizationResult:
        feas = [t for t in self.trace if t.feasible]
        if feas:
            best = max(feas, key=lambda t: t.value)
            return OptimizationResult(method=method,
                                      best_design=best.design.copy(),
                                      best_value=best.value, trace=self.trace,
                                      feasible=True,
                                      warnings=list(warnings or []))
        notes = list(warnings or [])
        notes.append("no feasible evaluation within budget")
        least_bad = None
        if self.trace:
            least_bad = min(self.trace, key=lambda t: total_violation(
                t.design, self.problem))
        return OptimizationResult(
            method=method,
            best_design=least_bad.design.copy() if least_bad else None,
            best_value=None, trace=self.trace, feasible=False, warnings=notes)


def initial_point(problem: OptimizationProblem) -> np.ndarray:
    if problem.x0 is not None:
        x0 = np.clip(np.asarray(problem.x0, dtype=float), problem.lower,
                     problem.upper)
    else:
        x0 = 0.5 * (problem.lower + problem.upper)
    return problem.repair_ramp(x0)


def sample_feasible(problem: OptimizationProblem, rng: np.random.Generator,
                    max_failures: int = 10_000) -> np.ndarray:
    """Uniform feasible draw by rejection, with ramp repair as a first try."""
    failures = 0
    while True:
        x = problem.lower + rng.random(problem.dim) * (problem.upper - problem.lower)
        x = problem.repair_ramp(x)
        if feasible(problem.round_integers(x), problem).ok:
            return x
        failures += 1
        if failures >= max_failures:
            raise InputError(
                f"could not sample a feasible design in {max_failures} draws; "
                "the constrained region looks empty")
