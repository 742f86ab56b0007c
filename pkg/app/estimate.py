# Author: Muthana
# © 2026 Muthana. All rights reserved.
# Unauthorized copying or distribution is prohibited.

"""
Extrapolation of D_∞ from a finite distance series.

The series is drawn against x_k = k^{-γ}; the least-squares line over the
tail gives the intercept y at x = 0, and the lowest intercept among secants
through consecutive tail points gives the lower estimate L.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Sequence, Union

import numpy as np

from .errors import EstimateError
from .krylov import DistanceSeries

logger = logging.getLogger(__name__)

GAMMA_MIN = 0.10
GAMMA_MAX = 2.00
GAMMA_STEP = 0.05
TIE_RTOL = 1e-12
LOWER_FLOOR = -1.0
INTERCEPT_SLACK = 0.05

SeriesLike = Union[DistanceSeries, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class FitResult:
    gamma: float
    intercept_y: float
    slope: float
    sse: float
    l_lower: float
    tail_start: int
    points: int
    candidates: tuple[tuple[float, float], ...] = ()


def default_gamma_grid(
    gamma_min: float = GAMMA_MIN,
    gamma_max: float = GAMMA_MAX,
    step: float = GAMMA_STEP,
) -> tuple[float, ...]:
    if gamma_min <= 0 or step <= 0 or gamma_max < gamma_min:
        raise EstimateError(f"invalid gamma grid min={gamma_min} max={gamma_max} step={step}")
    count = int(math.floor((gamma_max - gamma_min) / step + 1e-9)) + 1
    return tuple(round(gamma_min + i * step, 10) for i in range(count))


def _distances(series: SeriesLike) -> np.ndarray:
    if isinstance(series, DistanceSeries):
        return series.distances
    return np.asarray(series, dtype=np.float64)


def default_tail_start(series: SeriesLike) -> int:
    """Latter half of the series: n // 2 where n is the last step."""
    return (len(_distances(series)) - 1) // 2


def _tail(distances: np.ndarray, tail_start: int) -> tuple[np.ndarray, np.ndarray]:
    steps = np.arange(distances.size)
    keep = steps >= max(tail_start, 1)
    return steps[keep].astype(np.float64), distances[keep]


def _line(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    x_mean = x.mean()
    y_mean = y.mean()
    dx = x - x_mean
    dy = y - y_mean
    slope = float(np.sum(dx * dy) / np.sum(dx * dx))
    intercept = float(y_mean - slope * x_mean)
    residual = y - (intercept + slope * x)
    return intercept, slope, float(np.sum(residual * residual))


def lower_estimate(series: SeriesLike, gamma: float, tail_start: int | None = None) -> float:
    """Lowest y-intercept over secants through consecutive rescaled tail points, floored at -1."""
    if gamma <= 0:
        raise EstimateError(f"gamma must be positive, got {gamma}")
    distances = _distances(series)
    start = default_tail_start(distances) if tail_start is None else tail_start
    steps, values = _tail(distances, start)
    if steps.size < 2:
        raise EstimateError(f"lower estimate needs at least 2 points from step {start}, got {steps.size}")

    x = steps ** -gamma
    slopes = np.diff(values) / np.diff(x)
    intercepts = values[:-1] - slopes * x[:-1]
    return max(float(intercepts.min()), LOWER_FLOOR)


def fit_intercept(
    series: SeriesLike,
    gamma_grid: Sequence[float] | None = None,
    tail_start: int | None = None,
) -> FitResult:
    """
    Least-squares line through (k^{-γ}, D_k) for every γ in the grid; the γ with
    the smallest residual wins, ties going to the smaller γ.
    """
    distances = _distances(series)
    start = default_tail_start(distances) if tail_start is None else tail_start
    if start < 0:
        raise EstimateError(f"tail_start must be non-negative, got {start}")
    if distances.size < start + 3:
        raise EstimateError(f"series of {distances.size} terms is too short for tail_start={start}")

    grid = sorted(set(float(g) for g in (gamma_grid if gamma_grid is not None else default_gamma_grid())))
    if not grid:
        raise EstimateError("gamma grid is empty")
    if grid[0] <= 0:
        raise EstimateError(f"gamma values must be positive, got {grid[0]}")

    steps, values = _tail(distances, start)
    spread = float(np.sum((values - values.mean()) ** 2))
    candidates = []
    for gamma in grid:
        intercept, slope, sse = _line(steps ** -gamma, values)
        candidates.append((gamma, intercept, slope, sse))

    best_sse = min(c[3] for c in candidates)
    tolerance = TIE_RTOL * spread
    gamma, intercept, slope, sse = next(c for c in candidates if c[3] <= best_sse + tolerance)

    if not -INTERCEPT_SLACK <= intercept <= 1.0:
        logger.warning(f"intercept {intercept:.6f} outside [-{INTERCEPT_SLACK}, 1] (gamma={gamma})")

    return FitResult(
        gamma=gamma,
        intercept_y=intercept,
        slope=slope,
        sse=sse,
        l_lower=lower_estimate(distances, gamma, start),
        tail_start=start,
        points=int(steps.size),
        candidates=tuple((c[0], c[3]) for c in candidates),
    )


def estimate_series(
    series: SeriesLike,
    gamma_grid: Sequence[float] | None = None,
    tail_start: int | None = None,
    lower_tail_start: int | None = None,
) -> FitResult:
    """fit_intercept, with the secant range optionally different from the fit tail."""
    fit = fit_intercept(series, gamma_grid, tail_start)
    if lower_tail_start is None or lower_tail_start == fit.tail_start:
        return fit
    return replace(fit, l_lower=lower_estimate(series, fit.gamma, lower_tail_start))
