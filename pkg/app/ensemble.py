# Author: Muthana
# © 2026 Muthana. All rights reserved.
# Unauthorized copying or distribution is prohibited.

"""
Disorder sweeps: for every c and realization, run the Krylov engine, fit y and
L, and keep the smallest values per c.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from itertools import groupby
from typing import List, Optional

import numpy as np
from joblib import Parallel, delayed
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.stats import spearmanr

from . import config
from .errors import EstimateError, NumericalDegeneracyError
from .estimate import default_gamma_grid, estimate_series
from .krylov import OrthogonalizationMode, parse_mode, run_krylov
from .lattice import PotentialField

logger = logging.getLogger(__name__)

STATUS_OK = "ok"
STATUS_BREAKDOWN = "breakdown"
STATUS_DEGENERATE = "degenerate"
STATUS_SHORT = "short"


class SweepConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    c_values: List[float]
    realizations: int = Field(default=20, ge=1)
    n: int = Field(default=400, ge=1)
    seed: int = 1
    mode: str = "lanczos"
    reorthogonalize_every: Optional[int] = Field(default=5, ge=1)
    window: Optional[int] = Field(default=config.REORTH_WINDOW, ge=1)
    gamma_min: float = Field(default=0.10, gt=0)
    gamma_max: float = Field(default=2.00, gt=0)
    gamma_step: float = Field(default=0.05, gt=0)
    tail_start: Optional[int] = Field(default=None, ge=0)
    lower_tail_start: Optional[int] = Field(default=None, ge=0)

    @field_validator("c_values")
    @classmethod
    def _sorted_disorders(cls, values: List[float]) -> List[float]:
        if not values:
            raise ValueError("c_values must not be empty")
        for c in values:
            if not math.isfinite(c) or c < 0:
                raise ValueError(f"disorder values must be finite and non-negative, got {c}")
        return sorted(set(float(c) for c in values))

    @field_validator("mode")
    @classmethod
    def _known_mode(cls, value: str) -> str:
        parse_mode(value)
        return value

    @model_validator(mode="after")
    def _fit_window(self) -> "SweepConfig":
        if self.gamma_max < self.gamma_min:
            raise ValueError("gamma_max must not be below gamma_min")
        if self.effective_tail_start + 3 > self.n + 1:
            raise ValueError(f"tail_start {self.effective_tail_start} leaves fewer than 3 points for n={self.n}")
        return self

    @property
    def effective_tail_start(self) -> int:
        return self.n // 2 if self.tail_start is None else self.tail_start

    def orthogonalization_mode(self) -> OrthogonalizationMode:
        return parse_mode(self.mode, self.reorthogonalize_every, self.window)

    def gamma_grid(self) -> tuple[float, ...]:
        return default_gamma_grid(self.gamma_min, self.gamma_max, self.gamma_step)


@dataclass(frozen=True)
class RealizationResult:
    c: float
    realization: int
    y: float
    l_lower: float
    gamma: float
    sse: float
    breakdown: bool
    drift: float
    status: str
    steps: int

    @property
    def usable(self) -> bool:
        return self.status in (STATUS_OK, STATUS_BREAKDOWN)


@dataclass(frozen=True)
class EnsembleRecord:
    c: float
    min_y: float
    min_l: float
    argmin_y: Optional[int]
    argmin_l: Optional[int]
    realizations: tuple[RealizationResult, ...]
    valid: bool = True


def run_realization(sweep: SweepConfig, c: float, realization: int) -> RealizationResult:
    field = PotentialField(c=c, seed=sweep.seed, realization=realization)
    nan = math.nan
    try:
        series = run_krylov(field, sweep.n, sweep.orthogonalization_mode())
    except NumericalDegeneracyError as exc:
        logger.warning(f"c={c} realization={realization}: {exc}")
        return RealizationResult(c, realization, nan, nan, nan, nan, False, nan, STATUS_DEGENERATE, exc.step)

    distances = series.distances
    if series.breakdown and series.n < sweep.n:
        # later Bessel terms vanish after breakdown
        distances = np.pad(distances, (0, sweep.n - series.n), mode="edge")

    try:
        fit = estimate_series(distances, sweep.gamma_grid(), sweep.effective_tail_start, sweep.lower_tail_start)
    except EstimateError as exc:
        logger.warning(f"c={c} realization={realization}: {exc}")
        return RealizationResult(c, realization, nan, nan, nan, nan, series.breakdown, series.drift, STATUS_SHORT, series.n)

    return RealizationResult(
        c=c,
        realization=realization,
        y=fit.intercept_y,
        l_lower=fit.l_lower,
        gamma=fit.gamma,
        sse=fit.sse,
        breakdown=series.breakdown,
        drift=series.drift,
        status=STATUS_BREAKDOWN if series.breakdown else STATUS_OK,
        steps=series.n,
    )


def _argmin(results: list[RealizationResult], attribute: str) -> RealizationResult:
    return min(results, key=lambda r: (getattr(r, attribute), r.realization))


def aggregate(c: float, results: list[RealizationResult]) -> EnsembleRecord:
    """Independent minima of y and L over the usable realizations."""
    usable = [r for r in results if r.usable]
    if not usable:
        logger.warning(f"c={c}: no usable realization")
        return EnsembleRecord(c, math.nan, math.nan, None, None, tuple(results), valid=False)
    best_y = _argmin(usable, "y")
    best_l = _argmin(usable, "l_lower")
    return EnsembleRecord(
        c=c,
        min_y=best_y.y,
        min_l=best_l.l_lower,
        argmin_y=best_y.realization,
        argmin_l=best_l.realization,
        realizations=tuple(results),
    )


def run_sweep(sweep: SweepConfig, threads: int = 1) -> list[EnsembleRecord]:
    """
    Every (c, realization) pair is an independent job; results are sorted by
    (c, realization) before aggregation so the output does not depend on threads.
    """
    jobs = [(c, r) for c in sweep.c_values for r in range(sweep.realizations)]
    logger.info(f"sweep: {len(sweep.c_values)} disorders x {sweep.realizations} realizations, n={sweep.n}, threads={threads}")

    if threads > 1:
        results = Parallel(n_jobs=threads)(delayed(run_realization)(sweep, c, r) for c, r in jobs)
    else:
        results = [run_realization(sweep, c, r) for c, r in jobs]

    results = sorted(results, key=lambda r: (r.c, r.realization))
    records = []
    for c, group in groupby(results, key=lambda r: r.c):
        record = aggregate(c, list(group))
        logger.info(f"c={c}: min_y={record.min_y:.6f} min_L={record.min_l:.6f}")
        records.append(record)
    return records


def spearman_trend(records: list[EnsembleRecord]) -> float:
    """Rank correlation between c and min_y over the valid records."""
    valid = [r for r in records if r.valid]
    if len(valid) < 2:
        return math.nan
    return float(spearmanr([r.c for r in valid], [r.min_y for r in valid])[0])
