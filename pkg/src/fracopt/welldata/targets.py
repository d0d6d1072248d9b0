"""Target construction from monthly cumulative production."""

from __future__ import annotations

from typing import Optional

from ..errors import InsufficientDataError
from .records import ProductionSeries

TARGET_HORIZON_DAYS = 90.0


def target_90d(series: ProductionSeries) -> Optional[float]:
    """Cumulative fluid at 90 active days by linear interpolation.

    Cumulative production is anchored at (0, 0), so a single checkpoint past
    the horizon still interpolates. Returns ``None`` when the recorded
    history ends before 90 days; such wells are excluded from training
    instead of extrapolated.
    """
    if len(series) == 0:
        raise InsufficientDataError("production series is empty")
    pts = series.checkpoints
    if pts[-1][0] < TARGET_HORIZON_DAYS:
        return None
    if pts[0][0] > 0:
        pts = [(0.0, 0.0)] + pts
    for (d0, f0), (d1, f1) in zip(pts, pts[1:]):
        if d0 <= TARGET_HORIZON_DAYS <= d1:
            if d1 == d0:
                return float(f1)
            frac = (TARGET_HORIZON_DAYS - d0) / (d1 - d0)
            return float(f0 + frac * (f1 - f0))
    # horizon exactly at the only checkpoint
    return float(pts[-1][1])
