"""Regression quality scores for the forecast model."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InputError


@dataclass
class Metrics:
    r2: float
    mae: float          # m^3
    median_ae: float    # m^3
    mape: float         # percent
    wmape: float        # percent
    mse: float          # m^6
    rmse: float         # m^3
    n: int = 0
    mape_excluded: int = 0   # zero-target rows left out of MAPE

    def as_row(self) -> dict:
        return {"r2": self.r2, "mae": self.mae, "median_ae": self.median_ae,
                "mape": self.mape, "wmape": self.wmape, "mse": self.mse,
                "rmse": self.rmse, "n": self.n,
                "mape_excluded": self.mape_excluded}


def compute_metrics(y_true, y_pred) -> Metrics:
    y = np.asarray(y_true, dtype=float)
    p = np.asarray(y_pred, dtype=float)
    if y.size == 0:
        raise InputError("empty holdout")
    if y.shape != p.shape:
        raise InputError("prediction/target length mismatch")
    err = p - y
    abs_err = np.abs(err)
    sst = float(((y - y.mean()) ** 2).sum())
    sse = float((err ** 2).sum())
    r2 = 1.0 - sse / sst if sst > 0 else (1.0 if sse == 0 else 0.0)
    nz = y != 0
    mape = float(np.mean(abs_err[nz] / np.abs(y[nz])) * 100) if nz.any() else float("nan")
    denom = float(np.abs(y).sum())
    wmape = float(abs_err.sum() / denom * 100) if denom > 0 else float("nan")
    mse = float((err ** 2).mean())
    return Metrics(r2=float(r2), mae=float(abs_err.mean()),
                   median_ae=float(np.median(abs_err)), mape=mape,
                   wmape=wmape, mse=mse, rmse=float(np.sqrt(mse)),
                   n=int(y.size), mape_excluded=int((~nz).sum()))
