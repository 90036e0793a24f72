"""Convergence diagnostics: relative deviations and the exponential-law fit.

The resummation error shrinks like exp(-C * N^(3/5)), so the log of the
relative deviation is fitted against the regressor N^(3/5) by ordinary
least squares with an intercept.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log

import numpy as np


def relative_deviation(b: float, b_ref: float) -> float:
    """|b - b_ref| / b_ref."""
    if b_ref == 0:
        raise ValueError("reference value must be nonzero")
    return abs(b - b_ref) / b_ref


@dataclass(frozen=True)
class ConvergenceFit:
    slope: float
    intercept: float
    slope_stderr: float
    intercept_stderr: float
    points: tuple[tuple[float, float], ...]

    def regressor(self, n: float) -> float:
        return n**0.6

    def predicted_log_deviation(self, n: float) -> float:
        return self.slope * self.regressor(n) + self.intercept

    def to_json_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "slope_stderr": self.slope_stderr,
            "intercept_stderr": self.intercept_stderr,
            "n_points": len(self.points),
        }


def fit_convergence(points: list[tuple[float, float]]) -> ConvergenceFit:
    """OLS fit of ln(deviation) against N^(3/5), with intercept.

    `points` holds (N, deviation) pairs; every deviation must be positive.
    Standard errors are the usual OLS estimates from the residual variance.
    """
    if len(points) < 3:
        raise ValueError(f"need at least 3 points, got {len(points)}")
    for n, dev in points:
        if dev <= 0:
            raise ValueError(f"deviation must be positive to take its log, got {dev} at N={n}")
    x = np.array([n**0.6 for n, _ in points], dtype=float)
    y = np.array([log(dev) for _, dev in points], dtype=float)
    n = len(points)
    xbar, ybar = x.mean(), y.mean()
    sxx = float(((x - xbar) ** 2).sum())
    slope = float(((x - xbar) * (y - ybar)).sum()) / sxx
    intercept = ybar - slope * xbar
    resid = y - (slope * x + intercept)
    s2 = float((resid**2).sum()) / (n - 2)
    return ConvergenceFit(
        slope=slope,
        intercept=float(intercept),
        slope_stderr=(s2 / sxx) ** 0.5,
        intercept_stderr=(s2 * (1.0 / n + xbar**2 / sxx)) ** 0.5,
        points=tuple((float(a), float(b)) for a, b in points),
    )
