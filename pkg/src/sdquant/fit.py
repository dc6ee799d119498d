"""Least-squares line fits on log-log data."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    r_squared: float
    points_used: int

    def predict(self, x):
        return np.exp(self.intercept) * np.asarray(x, dtype=float) ** self.slope


def fit_loglog_slope(points) -> SlopeFit:
    """OLS fit of ``log(error) = intercept + slope * log(m)``.

    ``points`` is an iterable of ``(m, error)`` pairs, or a 2-column array.
    Natural logs; the slope does not depend on the base.
    """
    pts = np.asarray(list(points) if not isinstance(points, np.ndarray) else points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be (m, error) pairs")
    if len(pts) < 2:
        raise ValueError(f"need at least 2 points, got {len(pts)}")
    if not np.all(np.isfinite(pts)) or np.any(pts <= 0):
        raise ValueError("all m and error values must be positive and finite")
    lx, ly = np.log(pts[:, 0]), np.log(pts[:, 1])
    if np.ptp(lx) == 0:
        raise ValueError("need at least two distinct m values")
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (intercept + slope * lx)
    ss_tot = np.sum((ly - ly.mean()) ** 2)
    r2 = 1.0 if ss_tot == 0 else 1.0 - np.sum(resid**2) / ss_tot
    return SlopeFit(float(slope), float(intercept), float(min(max(r2, 0.0), 1.0)), len(pts))
