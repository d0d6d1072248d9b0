"""Gaussian-process surrogate with ARD squared-exponential kernel.

Hyperparameters (signal variance, per-dimension length scales, noise) are
chosen by maximizing the log marginal likelihood with a multi-start random
search plus coordinate refinement, all gradient-free and deterministic per
seed. Inputs are expected on the unit cube; targets are standardized
internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import FitError

JITTER = 1e-8


def norm_cdf(z: float) -> float:
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


def norm_pdf(z: float) -> float:
    return math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)


@dataclass
class GPSurrogate:
    X: np.ndarray
    y_mean: float
    y_scale: float
    signal_var: float
    length_scales: np.ndarray
    noise_var: float
    chol: np.ndarray = field(repr=False, default=None)
    alpha: np.ndarray = field(repr=False, default=None)

    def _cross(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        d = (A[:, None, :] - B[None, :, :]) / self.length_scales
        return self.signal_var * np.exp(-0.5 * (d * d).sum(-1))

    def predict(self, X_query: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Posterior mean and (noise-free) variance at the query points."""
        Xq = np.atleast_2d(np.asarray(X_query, dtype=float))
        Ks = self._cross(Xq, self.X)
        mu = Ks @ self.alpha
        v = np.linalg.solve(self.chol, Ks.T)
        var = np.maximum(self.signal_var - (v * v).sum(axis=0), 0.0)
        return self.y_mean + self.y_scale * mu, var * self.y_scale ** 2


def _nll(theta: np.ndarray, X: np.ndarray, z: np.ndarray) -> float:
    n, d = X.shape
    sf2 = math.exp(2.0 * theta[0])
    ls = np.exp(theta[1:1 + d])
    sn2 = math.exp(2.0 * theta[-1])
    diff = (X[:, None, :] - X[None, :, :]) / ls
    K = sf2 * np.exp(-0.5 * (diff * diff).sum(-1)) + (sn2 + JITTER) * np.eye(n)
    try:
        L = np.linalg.cholesky(K)
    except np.linalg.LinAlgError:
        return math.inf
    alpha = np.linalg.solve(L.T, np.linalg.solve(L, z))
    val = 0.5 * float(z @ alpha) + float(np.log(np.diag(L)).sum()) \
        + 0.5 * n * math.log(2.0 * math.pi)
    return val if math.isfinite(val) else math.inf


def gp_fit(X: np.ndarray, y: np.ndarray, seed: int = 0,
           n_starts: int = 30) -> GPSurrogate:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    n, d = X.shape
    if n < 2 or len(np.unique(X, axis=0)) < 2:
        raise FitError("need at least 2 distinct training points")
    y_mean = float(y.mean())
    y_scale = float(y.std()) or 1.0
    z = (y - y_mean) / y_scale

    rng = np.random.default_rng(seed)
    candidates = [np.r_[0.0, np.full(d, math.log(0.3)), math.log(1e-3)]]
    for _ in range(n_starts):
        candidates.append(np.r_[rng.uniform(-1.5, 1.0),
                                rng.uniform(math.log(0.05), math.log(2.0), d),
                                rng.uniform(math.log(1e-6), math.log(0.5))])
    best, best_val = None, math.inf
    for theta in candidates:
        v = _nll(theta, X, z)
        if v < best_val:
            best, best_val = theta.copy(), v
    if best is None or not math.isfinite(best_val):
        raise FitError("marginal likelihood non-finite for all candidates")

    step = 0.5
    for _ in range(8):
        improved = False
        for k in range(len(best)):
            for s in (step, -step):
                theta = best.copy()
                theta[k] += s
                v = _nll(theta, X, z)
                if v < best_val:
                    best, best_val, improved = theta, v, True
        if not improved:
            step *= 0.5

    sf2 = math.exp(2.0 * best[0])
    ls = np.exp(best[1:1 + d])
    sn2 = math.exp(2.0 * best[-1])
    diff = (X[:, None, :] - X[None, :, :]) / ls
    K = sf2 * np.exp(-0.5 * (diff * diff).sum(-1)) + (sn2 + JITTER) * np.eye(n)
    L = np.linalg.cholesky(K)
    alpha = np.linalg.solve(L.T, np.linalg.solve(L, z))
    return GPSurrogate(X=X.copy(), y_mean=y_mean, y_scale=y_scale,
                       signal_var=sf2, length_scales=ls, noise_var=sn2,
                       chol=L, alpha=alpha)


def gp_predict(surrogate: GPSurrogate, x: np.ndarray) -> tuple[float, float]:
    mu, var = surrogate.predict(np.atleast_2d(x))
    return float(mu[0]), float(var[0])


def acquisition(surrogate: GPSurrogate, x: np.ndarray, best_so_far: float,
                kind: str = "EI") -> float:
    return float(acquisition_batch(surrogate, np.atleast_2d(x), best_so_far,
                                   kind)[0])


def acquisition_batch(surrogate: GPSurrogate, X_query: np.ndarray,
                      best_so_far: float, kind: str = "EI") -> np.ndarray:
    """Expected improvement or probability of improvement (maximization)."""
    if kind not in ("EI", "PI"):
        raise FitError(f"unknown acquisition kind {kind!r}")
    mu, var = surrogate.predict(X_query)
    sigma = np.sqrt(var)
    imp = mu - best_so_far
    out = np.empty(len(mu))
    degenerate = sigma <= 1e-12
    if kind == "EI":
        out[degenerate] = np.maximum(imp[degenerate], 0.0)
        s = sigma[~degenerate]
        z = imp[~degenerate] / s
        out[~degenerate] = imp[~degenerate] * _vec_cdf(z) + s * _vec_pdf(z)
    else:
        out[degenerate] = (imp[degenerate] > 0).astype(float)
        z = imp[~degenerate] / sigma[~degenerate]
        out[~degenerate] = _vec_cdf(z)
    return np.maximum(out, 0.0)


def _vec_cdf(z: np.ndarray) -> np.ndarray:
    return np.array([norm_cdf(float(v)) for v in z])


def _vec_pdf(z: np.ndarray) -> np.ndarray:
    return np.array([norm_pdf(float(v)) for v in z])
