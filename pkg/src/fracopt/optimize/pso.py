"""Particle swarm search under a hard evaluation budget.

Constriction-style coefficients, zero initial velocities, velocity clamped
to half the box width and positions clipped into bounds. Constraints enter
through the same static penalty as differential evolution, and the run
ends with the shared projected-gradient polish (``polish_frac=0`` turns it
off).
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError
from .local import polish
from .problem import (BudgetExhausted, Evaluator, OptimizationProblem,
                      OptimizationResult)


@dataclass
class PsoConfig:
    swarm: int = 15
    inertia: float = 0.72
    cognitive: float = 1.49
    social: float = 1.49
    polish_frac: float = 0.35


def optimize_pso(problem: OptimizationProblem, seed: int = 0,
                 config: PsoConfig | None = None) -> OptimizationResult:
    t0 = time.monotonic()
    cfg = config or PsoConfig()
    if problem.budget < cfg.swarm:
        raise ConfigError("budget must cover at least one swarm evaluation")
    rng = np.random.default_rng(seed)
    evaluator = Evaluator(problem)
    lo, hi = problem.lower, problem.upper
    dim = problem.dim
    n = cfg.swarm
    vmax = 0.5 * (hi - lo)

    X = lo + rng.random((n, dim)) * (hi - lo)
    V = np.zeros((n, dim))
    fitness = np.empty(n)
    swarm_budget = problem.budget - int(cfg.polish_frac * problem.budget)
    try:
        for i in range(n):
            _, fitness[i], _ = evaluator(X[i])
        pbest, pbest_f = X.copy(), fitness.copy()
        g = int(np.argmax(pbest_f))
        gbest, gbest_f = pbest[g].copy(), float(pbest_f[g])
        while evaluator.evaluations < swarm_budget:
            for i in range(n):
                if evaluator.evaluations >= swarm_budget:
                    break
                V[i] = (cfg.inertia * V[i]
                        + cfg.cognitive * rng.random(dim) * (pbest[i] - X[i])
                        + cfg.social * rng.random(dim) * (gbest - X[i]))
                V[i] = np.clip(V[i], -vmax, vmax)
                X[i] = np.clip(X[i] + V[i], lo, hi)
                _, f, _ = evaluator(X[i])
                if f > pbest_f[i]:
                    pbest[i], pbest_f[i] = X[i].copy(), f
                if f > gbest_f:
                    gbest, gbest_f = X[i].copy(), float(f)
        if cfg.polish_frac > 0 and evaluator.remaining > 0:
            polish(evaluator, gbest, gbest_f, evaluator.remaining)
    except BudgetExhausted:
        pass

    result = evaluator.result("pso")
    result.wall_time_s = time.monotonic() - t0
    return result
