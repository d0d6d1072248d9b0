"""Projected-gradient local search with multi-start.

Serves both as the standalone local optimizer and as the finishing polish
of the population methods. Gradients are central finite differences with a
step of 1e-3 of the box width; every iterate is clipped into the box and
projected back onto the ramp constraint. The line search warm-starts from
the previous accepted step so terminal convergence stays fast.
"""

from __future__ import annotations

import time

import numpy as np

from .problem import (BudgetExhausted, Evaluator, OptimizationProblem,
                      OptimizationResult, initial_point)

_GRAD_TOL = 1e-12


def polish(evaluator: Evaluator, x0: np.ndarray, f0: float,
           max_evals: int) -> tuple[np.ndarray, float]:
    """Ascend from (x0, f0) until converged or ``max_evals`` spent."""
    problem = evaluator.problem
    lo, hi = problem.lower, problem.upper
    width = hi - lo
    h = 1e-3 * width
    x, fx = np.asarray(x0, dtype=float).copy(), f0
    dim = problem.dim
    spent = 0
    step = float(np.max(width))

    def have(n: int) -> bool:
        return spent + n <= max_evals and evaluator.remaining >= n

    try:
        while have(2 * dim + 1):
            grad = np.zeros(dim)
            for k in range(dim):
                e = np.zeros(dim)
                e[k] = h[k]
                xp = problem.repair_ramp(np.clip(x + e, lo, hi))
                xm = problem.repair_ramp(np.clip(x - e, lo, hi))
                denom = xp[k] - xm[k]
                spent += 2
                if denom == 0:
                    continue
                _, fp, _ = evaluator(xp)
                _, fm, _ = evaluator(xm)
                grad[k] = (fp - fm) / denom
            norm = float(np.linalg.norm(grad))
            if norm < _GRAD_TOL:
                break
            direction = grad / norm
            trial_step = min(step * 2.0, float(np.max(width)))
            improved = False
            while have(1):
                cand = problem.repair_ramp(
                    np.clip(x + trial_step * direction, lo, hi))
                _, fc, _ = evaluator(cand)
                spent += 1
                if fc > fx:
                    x, fx = cand, fc
                    step = trial_step
                    improved = True
                    break
                trial_step *= 0.5
                if trial_step < 1e-14 * float(np.max(width)):
                    break
            if not improved:
                break
    except BudgetExhausted:
        pass
    return x, fx


def optimize_local(problem: OptimizationProblem, seed: int = 0,
                   ) -> OptimizationResult:
    """Multi-start projected gradient ascent under the evaluation budget.

    The first start is the supplied initialization (cluster-mean design);
    each start is polished to convergence and leftover budget funds uniform
    random restarts. A budget too small for one gradient evaluation returns
    the best start point with a warning.
    """
    t0 = time.monotonic()
    rng = np.random.default_rng(seed)
    evaluator = Evaluator(problem)
    warnings: list[str] = []
    dim = problem.dim
    grad_cost = 2 * dim + 1

    try:
        x0 = initial_point(problem)
        _, f0, _ = evaluator(x0)
        if problem.budget < grad_cost + 1:
            warnings.append("budget below one gradient evaluation; "
                            "returning best start point")
        while evaluator.remaining > grad_cost:
            polish(evaluator, x0, f0, evaluator.remaining)
            if evaluator.remaining <= grad_cost:
                break
            x0 = problem.repair_ramp(
                problem.lower + rng.random(dim) * (problem.upper - problem.lower))
            _, f0, _ = evaluator(x0)
    except BudgetExhausted:
        pass

    result = evaluator.result("local", warnings)
    result.wall_time_s = time.monotonic() - t0
    return result
